#pragma once

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "evinet/combine.hpp"
#include "evinet/network.hpp"
#include "evinet/providers.hpp"

namespace evinet {

struct ConstructionLimits {
  int max_depth = 4;
  int max_in_degree = 3;
  int max_out_degree = 6;
  int max_nodes = 64;
  int retrieval_top_k = 5;
};

inline std::set<std::string> folded_tokens(const std::string& text) {
  std::set<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      tokens.insert(current);
      current.clear();
    }
  }
  if (!current.empty()) tokens.insert(current);
  return tokens;
}

// Plumbing-grade lexical retrieval: case-folded token overlap between the
// query and each document, top-k, ties broken by ascending document id.
inline std::vector<Document> retrieve(const std::vector<Document>& corpus,
                                      const std::string& query, int top_k) {
  const std::set<std::string> query_tokens = folded_tokens(query);
  std::vector<std::pair<int, const Document*>> scored;
  for (const auto& doc : corpus) {
    int overlap = 0;
    for (const auto& token : folded_tokens(doc.text)) {
      overlap += query_tokens.count(token);
    }
    if (overlap > 0) scored.emplace_back(overlap, &doc);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second->id < b.second->id;
  });
  std::vector<Document> out;
  for (const auto& [score, doc] : scored) {
    (void)score;
    if (static_cast<int>(out.size()) >= top_k) break;
    out.push_back(*doc);
  }
  return out;
}

// Reads one snippet under one parent state. The elicitor's partial mass map
// is validated against the restricted focal family and completed on the full
// frame; an empty map means the snippet was non-committal.
inline Bba elicit_conditional(const EvidenceSnippet& snippet,
                              const std::string& parent_state,
                              const Variable& child, BbaElicitor& elicitor) {
  if (!snippet.child.empty() && snippet.child != child.id) {
    fail(Errc::ProviderFailure, "snippet '" + snippet.id +
                                    "' targets '" + snippet.child +
                                    "', not '" + child.id + "'");
  }
  EvidenceSnippet bound = snippet;
  bound.parent_state = parent_state;
  return bba_from_partial_masses(child.frame,
                                 elicitor.elicit(bound, parent_state, child.frame));
}

// Multiple snippets supporting the same (edge, parent state) are merged with
// the K-way Yager rule, so contradictions surface as ignorance.
inline Bba aggregate_snippets(const std::vector<Bba>& snippet_bbas) {
  return yager_combine_k(snippet_bbas);
}

// Retrieval-guided breadth-first expansion from the hypothesis root.
// Children are attached in proposer order; proposals without snippet support
// are rejected; structural rejections (cycles, caps, depth, node budget)
// skip the proposal, with limit hits flagged in the network metadata.
inline EvidentialNetwork construct_network(const std::vector<Document>& corpus,
                                           const Variable& root,
                                           ChildProposer& proposer,
                                           BbaElicitor& elicitor,
                                           const ConstructionLimits& limits) {
  if (corpus.empty()) fail(Errc::EmptyDataset, "construction corpus is empty");
  NetworkMeta meta;
  meta.depth_limit = limits.max_depth;
  meta.max_in_degree = limits.max_in_degree;
  meta.max_out_degree = limits.max_out_degree;
  meta.max_nodes = limits.max_nodes;
  EvidentialNetwork net(root, meta);

  std::deque<std::pair<std::string, int>> queue;
  queue.emplace_back(root.id, 0);

  while (!queue.empty()) {
    const auto [parent_id, depth] = queue.front();
    queue.pop_front();
    const Variable parent = net.variable(parent_id);

    const std::string query =
        parent.description.empty() ? parent.id : parent.description;
    std::vector<Document> passages =
        retrieve(corpus, query, limits.retrieval_top_k);

    std::vector<Proposal> proposals;
    try {
      proposals = proposer.propose(parent, passages);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (while expanding '" +
                                parent_id + "')");
    }

    for (const auto& proposal : proposals) {
      if (proposal.snippets.empty()) continue;  // no grounding, rejected
      const std::string& child_id = proposal.child.id;

      const bool is_new = !net.has_variable(child_id);
      if (is_new) {
        if (depth + 1 > limits.max_depth) {
          net.meta().truncated = true;
          continue;
        }
        if (static_cast<int>(net.variables().size()) >= limits.max_nodes) {
          net.meta().truncated = true;
          continue;
        }
      } else {
        const Variable& existing = net.variable(child_id);
        if (!same_frame(*existing.frame, *proposal.child.frame)) {
          fail(Errc::ProviderFailure,
               "canonical id '" + child_id + "' proposed with two frames");
        }
      }

      // Structural pre-checks; a rejected edge must not trigger elicitation.
      if (net.has_edge(parent_id, child_id)) continue;
      if (proposal.child.kind == VariableKind::hypothesis) continue;
      if (!is_new && net.path_exists(child_id, parent_id)) continue;
      if (net.out_degree(parent_id) + 1 > limits.max_out_degree) {
        net.meta().truncated = true;
        continue;
      }
      if (!is_new && net.in_degree(child_id) + 1 > limits.max_in_degree) {
        net.meta().truncated = true;
        continue;
      }

      ConditionalBba edge;
      edge.parent = parent_id;
      edge.child = child_id;
      std::vector<std::string> snippet_ids;
      try {
        for (const auto& state : parent.frame->states()) {
          std::vector<Bba> readings;
          readings.reserve(proposal.snippets.size());
          for (const auto& snippet : proposal.snippets) {
            readings.push_back(
                elicit_conditional(snippet, state, proposal.child, elicitor));
          }
          edge.table.emplace(state, aggregate_snippets(readings));
        }
      } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + " (edge " +
                                  edge_key(parent_id, child_id) + ")");
      }
      for (const auto& snippet : proposal.snippets) {
        snippet_ids.push_back(snippet.id);
      }

      if (is_new) net = add_variable(std::move(net), proposal.child);
      net = add_edge(std::move(net), std::move(edge));
      net.meta().edge_snippets[edge_key(parent_id, child_id)] =
          std::move(snippet_ids);
      if (is_new) queue.emplace_back(child_id, depth + 1);
    }
  }
  return net;
}

}  // namespace evinet
