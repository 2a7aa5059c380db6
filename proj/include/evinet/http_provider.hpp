#pragma once

#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>

#include "evinet/providers.hpp"

namespace evinet {

// Prompt templates sent as the system message of a chat-completions style
// endpoint. Slots in the user message are filled by plain string
// substitution; replies must be a single JSON object.
inline constexpr const char* kElicitPromptTemplate =
    "Elicit a conditional belief assignment for an edge X -> Y from a single "
    "evidence snippet, under the assumption that X = x. Reply with a JSON "
    "object {\"support\": {\"<state>\": <mass>}} where each key is one state "
    "of Y or two states joined by a comma, and masses sum to at most 1. Use "
    "an empty object when the snippet is non-committal.";

inline constexpr const char* kProposePromptTemplate =
    "You are given a domain variable and passages retrieved for it. Propose "
    "candidate child variables (consequences, correlates, refinements) that "
    "the passages support, each with the snippets that justify the "
    "dependency. Reply with a JSON object {\"children\": [{\"id\": ..., "
    "\"kind\": \"observable\"|\"intermediate\", \"description\": ..., "
    "\"states\": [...], \"snippets\": [{\"id\": ..., \"text\": ..., "
    "\"doc\": ...}]}]}. Reuse the same id for paraphrases of a variable "
    "already proposed.";

inline constexpr const char* kEncodePromptTemplate =
    "You are a truthful assistant that encodes a client's answer onto the "
    "states of a variable. Reply with a JSON object {\"support\": "
    "{\"<state>\": <mass>}} using only the listed states (singletons or a "
    "comma-joined pair); leave unassigned mass out. Use an empty object when "
    "the answer is uninformative.";

inline constexpr const char* kPhrasePromptTemplate =
    "Generate one short, targeted question a domain expert would ask to "
    "learn the value of the variable below. Reply with a JSON object "
    "{\"question\": \"...\"}.";

struct HttpProviderConfig {
  std::string endpoint;  // full URL of a chat-completions style endpoint
  std::string api_key;
  std::string model;
  int timeout_seconds = 30;
  int max_retries = 2;

  static HttpProviderConfig from_env() {
    HttpProviderConfig config;
    if (const char* endpoint = std::getenv("EVINET_ENDPOINT")) {
      config.endpoint = endpoint;
    }
    if (const char* key = std::getenv("EVINET_API_KEY")) {
      config.api_key = key;
    }
    if (const char* model = std::getenv("EVINET_MODEL")) {
      config.model = model;
    }
    if (config.endpoint.empty()) {
      fail(Errc::InvalidConfig, "EVINET_ENDPOINT is not set");
    }
    return config;
  }
};

// Parses {"support": {"present": 0.8, "a,b": "0.1"}} into a partial mass
// map; masses may arrive as numbers or numeric strings.
inline PartialMasses support_from_reply(const Json& reply) {
  const Json& support = require_field(reply, "support", "provider reply");
  if (!support.is_object()) {
    fail(Errc::ParseError, "\"support\" must be an object");
  }
  PartialMasses parts;
  for (const auto& [key, value] : support.items()) {
    std::vector<std::string> labels;
    std::size_t start = 0;
    while (start <= key.size()) {
      const std::size_t comma = key.find(',', start);
      labels.push_back(key.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    double mass = 0.0;
    if (value.is_number()) {
      mass = value.get<double>();
    } else if (value.is_string()) {
      try {
        mass = std::stod(value.get<std::string>());
      } catch (const std::exception&) {
        fail(Errc::ParseError, "mass '" + value.get<std::string>() +
                                   "' is not numeric");
      }
    } else {
      fail(Errc::ParseError, "mass for '" + key + "' is not numeric");
    }
    parts.emplace_back(std::move(labels), mass);
  }
  return parts;
}

inline std::vector<Proposal> children_from_reply(const Json& reply,
                                                 const std::string& parent_id) {
  std::vector<Proposal> proposals;
  for (const auto& cj : require_field(reply, "children", "provider reply")) {
    Proposal p;
    p.child.id = require_field(cj, "id", "child").get<std::string>();
    p.child.kind = kind_from_name(cj.value("kind", std::string("observable")));
    p.child.description = cj.value("description", std::string{});
    p.child.frame = make_frame(
        p.child.id + "_states",
        require_field(cj, "states", "child").get<std::vector<std::string>>());
    if (cj.contains("snippets")) {
      for (const auto& sj : cj["snippets"]) {
        EvidenceSnippet s;
        s.id = require_field(sj, "id", "snippet").get<std::string>();
        s.text = sj.value("text", std::string{});
        s.doc_id = sj.value("doc", std::string{});
        s.parent = parent_id;
        s.child = p.child.id;
        p.snippets.push_back(std::move(s));
      }
    }
    proposals.push_back(std::move(p));
  }
  return proposals;
}

// Generic chat-completions client behind the four provider contracts. Every
// reply is re-validated exactly like scripted output; an invalid or failed
// call is retried up to max_retries times and then surfaces as
// ProviderFailure.
class HttpProvider : public ChildProposer,
                     public BbaElicitor,
                     public AnswerEncoder,
                     public QuestionPhrasing {
 public:
  explicit HttpProvider(HttpProviderConfig config)
      : config_(std::move(config)) {
    const auto scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos) {
      fail(Errc::InvalidConfig, "endpoint must include a scheme");
    }
    const auto path_start = config_.endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
      base_ = config_.endpoint;
      path_ = "/";
    } else {
      base_ = config_.endpoint.substr(0, path_start);
      path_ = config_.endpoint.substr(path_start);
    }
  }

  std::vector<Proposal> propose(const Variable& parent,
                                const std::vector<Document>& passages) override {
    std::string user = "Variable: " + parent.id + " (" + parent.description +
                       ")\nStates: " + join_states(*parent.frame) +
                       "\nPassages:\n";
    for (const auto& doc : passages) {
      user += "[" + doc.id + "] " + doc.text + "\n";
    }
    std::vector<Proposal> proposals;
    with_retries("propose", [&](const Json& reply) {
      proposals = children_from_reply(reply, parent.id);
      return true;
    }, kProposePromptTemplate, user);
    return proposals;
  }

  PartialMasses elicit(const EvidenceSnippet& snippet,
                       const std::string& parent_state,
                       const FramePtr& child_frame) override {
    const std::string user =
        "Snippet: " + snippet.text + "\nParent X: " + snippet.parent +
        "\nAssume X = " + parent_state + "\nChild Y: " + snippet.child +
        "\nStates of Y: " + join_states(*child_frame);
    PartialMasses parts;
    with_retries("elicit", [&](const Json& reply) {
      parts = support_from_reply(reply);
      bba_from_partial_masses(child_frame, parts);  // validation only
      return true;
    }, kElicitPromptTemplate, user);
    return parts;
  }

  Bba encode(const std::string& answer_text, const FramePtr& frame) override {
    const std::string user =
        "Answer: " + answer_text + "\nStates: " + join_states(*frame);
    Bba encoded = Bba::vacuous(frame);
    with_retries("encode", [&](const Json& reply) {
      encoded = bba_from_partial_masses(frame, support_from_reply(reply));
      return true;
    }, kEncodePromptTemplate, user);
    return encoded;
  }

  std::string phrase(const Variable& variable) override {
    std::string user = "Variable: " + variable.id + " (" +
                       variable.description + ")\nStates: " +
                       join_states(*variable.frame);
    const auto& descriptions = variable.state_descriptions();
    for (std::size_t i = 0; i < descriptions.size(); ++i) {
      user += "\n" + variable.frame->states()[i] + ": " + descriptions[i];
    }
    std::string question;
    with_retries("phrase", [&](const Json& reply) {
      question = require_field(reply, "question", "provider reply")
                     .get<std::string>();
      return !question.empty();
    }, kPhrasePromptTemplate, user);
    return question;
  }

 private:
  static std::string join_states(const Frame& frame) {
    std::string out;
    for (const auto& state : frame.states()) {
      if (!out.empty()) out += ", ";
      out += state;
    }
    return out;
  }

  Json post_chat(const std::string& system_prompt,
                 const std::string& user_content) {
    OrderedJson request;
    request["model"] = config_.model;
    request["messages"] = OrderedJson::array(
        {OrderedJson{{"role", "system"}, {"content", system_prompt}},
         OrderedJson{{"role", "user"}, {"content", user_content}}});
    request["response_format"] = OrderedJson{{"type", "json_object"}};

    httplib::Client client(base_);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    }
    auto result =
        client.Post(path_, headers, request.dump(), "application/json");
    if (!result) {
      fail(Errc::ProviderFailure,
           "transport failure: " + httplib::to_string(result.error()));
    }
    if (result->status != 200) {
      fail(Errc::ProviderFailure,
           "endpoint returned status " + std::to_string(result->status));
    }
    Json body;
    try {
      body = Json::parse(result->body);
    } catch (const Json::exception& e) {
      fail(Errc::ParseError, std::string("response is not JSON: ") + e.what());
    }
    const Json& choices = require_field(body, "choices", "response");
    if (!choices.is_array() || choices.empty()) {
      fail(Errc::ParseError, "response has no choices");
    }
    const std::string content =
        require_field(require_field(choices[0], "message", "choice"),
                      "content", "message")
            .get<std::string>();
    try {
      return Json::parse(content);
    } catch (const Json::exception& e) {
      fail(Errc::ParseError, std::string("message body is not JSON: ") + e.what());
    }
  }

  template <typename Handler>
  void with_retries(const char* what, Handler&& handler,
                    const std::string& system_prompt,
                    const std::string& user_content) {
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      try {
        if (handler(post_chat(system_prompt, user_content))) return;
        last_error = "handler rejected the reply";
      } catch (const Error& e) {
        last_error = e.what();
      }
    }
    fail(Errc::ProviderFailure, std::string(what) + " failed after " +
                                    std::to_string(config_.max_retries + 1) +
                                    " attempts: " + last_error);
  }

  HttpProviderConfig config_;
  std::string base_;
  std::string path_;
};

}  // namespace evinet
