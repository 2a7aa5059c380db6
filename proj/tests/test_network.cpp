#include <catch2/catch_amalgamated.hpp>

#include "evinet/network.hpp"
#include "support/test_support.hpp"

using namespace evinet;

namespace {

FramePtr binary_frame(const std::string& id) {
  return make_frame(id, {"present", "absent"});
}

Variable hypothesis_var() {
  return Variable{"H", make_frame("H_states", {"h1", "h2"}),
                  VariableKind::hypothesis, "the hypothesis"};
}

ConditionalBba full_edge(const EvidentialNetwork& net, const std::string& parent,
                         const std::string& child) {
  ConditionalBba edge;
  edge.parent = parent;
  edge.child = child;
  const FramePtr child_frame = net.variable(child).frame;
  for (const auto& state : net.variable(parent).frame->states()) {
    edge.table.emplace(state, Bba::vacuous(child_frame));
  }
  return edge;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::ParseError;
}

}  // namespace

TEST_CASE("variable bookkeeping") {
  EvidentialNetwork net(hypothesis_var());
  net = add_variable(net, Variable{"fever", binary_frame("fever_states"),
                                   VariableKind::observable, "fever"});
  REQUIRE(net.has_variable("fever"));
  REQUIRE(code_of([&] {
            add_variable(net, Variable{"fever", binary_frame("f2"),
                                       VariableKind::observable, ""});
          }) == Errc::DuplicateId);
  REQUIRE(code_of([&] {
            add_variable(net, Variable{"H2", binary_frame("h2f"),
                                       VariableKind::hypothesis, ""});
          }) == Errc::DuplicateHypothesis);
  REQUIRE_THROWS_AS(net.variable("nope"), Error);
}

TEST_CASE("edge insertion guards") {
  EvidentialNetwork net(hypothesis_var());
  net = add_variable(net, Variable{"fever", binary_frame("fever_states"),
                                   VariableKind::observable, "fever"});
  net = add_edge(net, full_edge(net, "H", "fever"));
  REQUIRE(net.has_edge("H", "fever"));

  SECTION("cycle back into the root") {
    REQUIRE(code_of([&] { add_edge(net, full_edge(net, "fever", "H")); }) ==
            Errc::CycleDetected);
  }
  SECTION("no edge may target the hypothesis node") {
    EvidentialNetwork isolated = add_variable(
        net, Variable{"lab", binary_frame("lab_states"),
                      VariableKind::observable, "lab result"});
    REQUIRE(code_of([&] { add_edge(isolated, full_edge(isolated, "lab", "H")); }) ==
            Errc::TypeConstraint);
  }
  SECTION("duplicate edges rejected") {
    REQUIRE(code_of([&] { add_edge(net, full_edge(net, "H", "fever")); }) ==
            Errc::DuplicateId);
  }
  SECTION("incomplete conditional table") {
    EvidentialNetwork wide = add_variable(
        net, Variable{"rash", binary_frame("rash_states"),
                      VariableKind::observable, "rash"});
    ConditionalBba edge = full_edge(wide, "H", "rash");
    edge.table.erase("h2");
    REQUIRE(code_of([&] { add_edge(wide, edge); }) ==
            Errc::IncompleteConditionalTable);
  }
  SECTION("rows must obey the restricted focal family") {
    EvidentialNetwork wide = add_variable(
        net, Variable{"grade", make_frame("grade_states", {"a", "b", "c", "d"}),
                      VariableKind::observable, "grade"});
    ConditionalBba edge;
    edge.parent = "H";
    edge.child = "grade";
    const FramePtr gf = wide.variable("grade").frame;
    const Bba bad = Bba::from_masses(gf, {{0b0111u, 1.0}});  // size-3 subset
    edge.table.emplace("h1", bad);
    edge.table.emplace("h2", Bba::vacuous(gf));
    REQUIRE(code_of([&] { add_edge(wide, edge); }) ==
            Errc::MalformedElicitation);
  }
  SECTION("degree caps enforced") {
    NetworkMeta meta;
    meta.max_out_degree = 1;
    EvidentialNetwork small(hypothesis_var(), meta);
    small = add_variable(small, Variable{"a", binary_frame("fa"),
                                         VariableKind::observable, ""});
    small = add_variable(small, Variable{"b", binary_frame("fb"),
                                         VariableKind::observable, ""});
    small = add_edge(small, full_edge(small, "H", "a"));
    REQUIRE(code_of([&] { add_edge(small, full_edge(small, "H", "b")); }) ==
            Errc::DegreeCapExceeded);
  }
}

TEST_CASE("acyclicity is preserved through random growth") {
  evitest::Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    EvidentialNetwork net = evitest::random_bayesian_polytree(rng, 6);
    for (const auto& [id, v] : net.variables()) {
      (void)v;
      // No node may reach itself through directed edges.
      for (const auto* e : net.edges_from(id)) {
        REQUIRE_FALSE(net.path_exists(e->child, id));
      }
    }
  }
}

TEST_CASE("structure diff") {
  auto line_net = [&](const std::vector<std::pair<std::string, std::string>>&
                          edges) {
    EvidentialNetwork net(hypothesis_var());
    for (const auto& [p, c] : edges) {
      (void)p;
      if (!net.has_variable(c)) {
        net = add_variable(net, Variable{c, binary_frame("f_" + c),
                                         VariableKind::observable, c});
      }
    }
    for (const auto& [p, c] : edges) {
      net = add_edge(net, full_edge(net, p, c));
    }
    return net;
  };

  SECTION("identical graphs") {
    const EvidentialNetwork g = line_net({{"H", "a"}, {"H", "b"}, {"a", "c"}});
    const StructureDiff diff = structure_diff(g, g);
    REQUIRE(diff.shd == 0);
    REQUIRE(diff.edge_precision == 1.0);
    REQUIRE(diff.edge_recall == 1.0);
  }
  SECTION("one missing edge") {
    const EvidentialNetwork ref =
        line_net({{"H", "a"}, {"H", "b"}, {"a", "c"}});
    const EvidentialNetwork cand = line_net({{"H", "a"}, {"H", "b"}});
    const StructureDiff diff = structure_diff(cand, ref);
    REQUIRE(diff.shd == 1);
    REQUIRE(diff.missing.size() == 1);
    REQUIRE(diff.edge_precision == 1.0);
    REQUIRE(diff.edge_recall == Catch::Approx(2.0 / 3.0));
  }
  SECTION("one extra plus one missing on an 8-edge reference") {
    std::vector<std::pair<std::string, std::string>> ref_edges = {
        {"H", "a"}, {"H", "b"}, {"a", "c"}, {"a", "d"},
        {"b", "e"}, {"b", "f"}, {"c", "g"}, {"d", "i"}};
    std::vector<std::pair<std::string, std::string>> cand_edges = ref_edges;
    cand_edges.pop_back();                 // missing d->i
    cand_edges.emplace_back("e", "g");     // extra; g gains a second parent
    const EvidentialNetwork ref = line_net(ref_edges);
    EvidentialNetwork cand = line_net(cand_edges);
    cand = add_variable(cand, Variable{"i", binary_frame("f_i"),
                                       VariableKind::observable, "i"});
    const StructureDiff diff = structure_diff(cand, ref);
    REQUIRE(diff.shd == 2);
    REQUIRE(diff.edge_precision == Catch::Approx(7.0 / 8.0));
    REQUIRE(diff.edge_recall == Catch::Approx(7.0 / 8.0));
  }
  SECTION("a reversed edge counts once") {
    const EvidentialNetwork ref = line_net({{"H", "a"}, {"a", "b"}});
    EvidentialNetwork cand2(hypothesis_var());
    cand2 = add_variable(cand2, Variable{"a", binary_frame("f_a"),
                                         VariableKind::observable, "a"});
    cand2 = add_variable(cand2, Variable{"b", binary_frame("f_b"),
                                         VariableKind::observable, "b"});
    cand2 = add_edge(cand2, full_edge(cand2, "H", "a"));
    cand2 = add_edge(cand2, full_edge(cand2, "b", "a"));  // reversed vs a->b
    const StructureDiff diff = structure_diff(cand2, ref);
    REQUIRE(diff.reversed.size() == 1);
    REQUIRE(diff.shd == 1);
  }
  SECTION("root mismatch is unalignable") {
    const EvidentialNetwork ref = line_net({{"H", "a"}});
    EvidentialNetwork other(Variable{"ROOT", make_frame("r_states", {"x", "y"}),
                                     VariableKind::hypothesis, ""});
    REQUIRE(code_of([&] { structure_diff(other, ref); }) ==
            Errc::UnalignableVariables);
  }
}
