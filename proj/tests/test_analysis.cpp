#include <doctest.h>

#include "er2rel/analysis.hpp"
#include "support/fixtures.hpp"

using namespace er2rel;
using fixtures::fin;
using fixtures::unb;

namespace {

struct Expected {
  VerdictKind kind;
  Justification justification;
};

void check_verdicts(const ErModel& model, const std::array<Expected, 4>& expected) {
  const PreservationReport report = analyze(model);
  REQUIRE(report.relationships.size() == 1);
  const auto& verdicts = report.relationships[0].verdicts;
  for (size_t i = 0; i < 4; ++i) {
    INFO("slot ", slot_name(verdicts[i].slot));
    CHECK(verdicts[i].kind == expected[i].kind);
    CHECK(verdicts[i].justification == expected[i].justification);
    if (expected[i].kind == VerdictKind::Exact) {
      CHECK(verdicts[i].bound == Cardinality::finite(1));
    } else if (expected[i].kind == VerdictKind::LowerBoundOnly) {
      CHECK(verdicts[i].bound == Cardinality::finite(1));
    } else {
      CHECK_FALSE(verdicts[i].bound.has_value());
    }
    CHECK_FALSE(verdicts[i].explanation.empty());
  }
}

constexpr Expected kExact1A{VerdictKind::Exact, Justification::Case1A};
constexpr Expected kNot1B{VerdictKind::NotRepresented, Justification::Case1B};
constexpr Expected kNot1C{VerdictKind::NotRepresented, Justification::Case1C};
constexpr Expected kNot1D{VerdictKind::NotRepresented, Justification::Case1D};
constexpr Expected kLower3{VerdictKind::LowerBoundOnly, Justification::Case3Max};
constexpr Expected kNot3{VerdictKind::NotRepresented, Justification::Case3Min};

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("1:1 verdicts depend only on which side holds the FK") {
  // (left min, right min) rows of the 1:1 grid; holder marked per row.
  SUBCASE("(1,0): FK in E") {
    check_verdicts(fixtures::pair_model({fin(1), fin(1)}, {fin(0), fin(1)}),
                   {kNot1B, kExact1A, kNot1D, kNot1C});
  }
  SUBCASE("(0,1): FK in S") {
    check_verdicts(fixtures::pair_model({fin(0), fin(1)}, {fin(1), fin(1)}),
                   {kNot1D, kNot1C, kNot1B, kExact1A});
  }
  SUBCASE("(0,0): tie-break to E") {
    check_verdicts(fixtures::pair_model({fin(0), fin(1)}, {fin(0), fin(1)}),
                   {kNot1B, kExact1A, kNot1D, kNot1C});
  }
  SUBCASE("(1,1): tie-break to E") {
    check_verdicts(fixtures::pair_model({fin(1), fin(1)}, {fin(1), fin(1)}),
                   {kNot1B, kExact1A, kNot1D, kNot1C});
  }
}

TEST_CASE("1:N verdicts are constant across min rows and many-bounds") {
  const std::array<std::pair<Cardinality, Cardinality>, 6> min_rows = {
      {{fin(1), fin(0)}, {fin(0), fin(1)}, {fin(0), fin(0)},
       {fin(1), fin(1)}, {fin(1), fin(2)}, {fin(0), fin(2)}}};
  for (const auto& many : {fin(2), fin(3), unb()}) {
    for (const auto& [m1, m2] : min_rows) {
      CAPTURE(many.to_string());
      // E on the one side
      check_verdicts(fixtures::pair_model({m1, fin(1)}, {m2, many}),
                     {kNot1B, kExact1A, kNot1D, kNot1C});
      // mirrored
      check_verdicts(fixtures::pair_model({m2, many}, {m1, fin(1)}),
                     {kNot1D, kNot1C, kNot1B, kExact1A});
    }
  }
}

TEST_CASE("M:N verdicts are invariant over the whole many grid") {
  for (int m1 : {0, 1}) {
    for (int m2 : {0, 1}) {
      for (const auto& x1 : {fin(2), fin(3), unb()}) {
        for (const auto& x2 : {fin(2), fin(3), unb()}) {
          check_verdicts(fixtures::pair_model({fin(m1), x1}, {fin(m2), x2}),
                         {kNot3, kLower3, kNot3, kLower3});
        }
      }
    }
  }
}

TEST_CASE("reports carry the encoding and placement") {
  const PreservationReport r1 = analyze(fixtures::one_to_one_model());
  CHECK(r1.relationships[0].encoding.kind == EncodingKind::FkInRelation);
  CHECK(r1.relationships[0].encoding.relation == "E");
  REQUIRE(r1.relationships[0].placement.has_value());
  CHECK(r1.relationships[0].placement->holder == Side::Left);
  CHECK(r1.relationships[0].placement->reason == PlacementReason::TotalParticipation);

  const PreservationReport r2 = analyze(fixtures::many_to_many_model());
  CHECK(r2.relationships[0].encoding.kind == EncodingKind::JunctionRelation);
  CHECK(r2.relationships[0].encoding.relation == "R");
  CHECK_FALSE(r2.relationships[0].placement.has_value());
}

TEST_CASE("declared slot values are echoed back") {
  const PreservationReport report = analyze(fixtures::one_to_many_model());
  const auto& verdicts = report.relationships[0].verdicts;
  CHECK(verdicts[0].declared == fin(1));
  CHECK(verdicts[1].declared == fin(1));
  CHECK(verdicts[2].declared == fin(0));
  CHECK(verdicts[3].declared == unb());
}

TEST_CASE("explanations name the relevant schema artifacts") {
  const PreservationReport report = analyze(fixtures::one_to_one_model());
  const auto& verdicts = report.relationships[0].verdicts;
  CHECK(verdicts[1].explanation.find("E.S_Ks") != std::string::npos);
  CHECK(verdicts[0].explanation.find("nullable") != std::string::npos);

  const PreservationReport junction = analyze(fixtures::many_to_many_model());
  CHECK(junction.relationships[0].verdicts[1].explanation.find("junction relation R") !=
        std::string::npos);
}

TEST_CASE("summarize counts verdicts") {
  ErModel model = fixtures::one_to_one_model();
  // add an M:N over a third entity so the tallies mix
  model.entities.push_back(EntityType{"T", "Kt", {}});
  model.relationships.push_back(
      RelationshipType{"Q", "S", "T", {fin(0), unb()}, {fin(0), unb()}});
  const ModelSummary s = summarize(analyze(model));
  CHECK(s.relationship_count == 2);
  CHECK(s.exact == 1);
  CHECK(s.lower_bound_only == 2);
  CHECK(s.not_represented == 5);
}

TEST_CASE("analyze rejects invalid models like transform does") {
  ErModel model = fixtures::one_to_one_model();
  model.relationships[0].left_entity = "Ghost";
  CHECK_THROWS_AS(analyze(model), TransformError);
}

TEST_CASE("a model without relationships analyzes to an empty report") {
  ErModel model;
  model.entities = {fixtures::entity_e()};
  const PreservationReport report = analyze(model);
  CHECK(report.relationships.empty());
  CHECK(summarize(report) == ModelSummary{0, 0, 0, 0});
}

}  // TEST_SUITE
