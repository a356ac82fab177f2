#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>

#include "support/testutil.hpp"
#include "zenosim/gallery.hpp"
#include "zenosim/limits.hpp"

using namespace zenosim;
using exec::RunBudget;
using exec::TmRunner;
using limits::InductiveVerdict;
using limits::IttmVerdict;
using limits::ZenoVerdict;

namespace {

std::shared_ptr<const core::Machine> make(const core::MachineDescription& d) {
  return std::make_shared<const core::Machine>(d);
}

ZenoVerdict zeno(const core::MachineDescription& d, const core::Word& w = {},
                 RunBudget budget = {}) {
  TmRunner r(make(d), w);
  return limits::zeno_run(r, budget);
}

}  // namespace

TEST_CASE("write0-park-loop stabilizes at 0") {
  ZenoVerdict v = zeno(gallery::write0_park_loop());
  REQUIRE(v.kind == ZenoVerdict::Kind::LimitStabilized);
  CHECK(v.cellOneValue == "0");
  REQUIRE(v.cycle.has_value());
  TmRunner r(make(gallery::write0_park_loop()), {});
  CHECK(testutil::certificate_replays(r, v.cycle->certificate));
  // The classification is recomputable from the recorded cycle data alone.
  CHECK(limits::classify_cycle(*v.cycle) == ZenoVerdict::Kind::LimitStabilized);
}

TEST_CASE("flip01 oscillates its first cell") {
  ZenoVerdict v = zeno(gallery::flip01());
  REQUIRE(v.kind == ZenoVerdict::Kind::FirstCellOscillates);
  CHECK(limits::classify_cycle(*v.cycle) == ZenoVerdict::Kind::FirstCellOscillates);
}

TEST_CASE("right-marcher stays undetermined at any finite budget") {
  for (uint64_t steps : {10000ULL, 100000ULL, 1000000ULL}) {
    ZenoVerdict v = zeno(gallery::right_marcher(), {},
                         {.maxSteps = steps, .maxStoredFingerprints = 1 << 20});
    CAPTURE(steps);
    CHECK(v.kind == ZenoVerdict::Kind::Undetermined);
    CHECK(v.stepsRun == steps);
  }
}

TEST_CASE("halting machines report the bit convention via the head position") {
  ZenoVerdict p = zeno(gallery::parity_machine(), core::word_from_chars("101"));
  REQUIRE(p.kind == ZenoVerdict::Kind::ClassicallyHalted);
  CHECK(p.outputHeadPosition == 2);
  CHECK(p.computesBit);
  CHECK(p.cellOneValue == "1");  // odd length

  ZenoVerdict far = zeno(gallery::halt_head_far());
  REQUIRE(far.kind == ZenoVerdict::Kind::ClassicallyHalted);
  CHECK_FALSE(far.computesBit);
  CHECK(far.outputHeadPosition == 5);
}

TEST_CASE("stable head away from cell 2 is not a computed bit") {
  ZenoVerdict v = zeno(gallery::work_bouncer());
  REQUIRE(v.kind == ZenoVerdict::Kind::OutputHeadUnstable);
}

TEST_CASE("oscillation wins over head instability in classification") {
  exec::CertifiedCycle cycle;
  cycle.certificate.entrySteps = 0;
  cycle.certificate.period = 2;
  cycle.certificate.cellOneValues = {"0", "1"};
  cycle.certificate.outputHeadPositions = {3, 7};
  cycle.outputTapeConstant = false;
  CHECK(limits::classify_cycle(cycle) == ZenoVerdict::Kind::FirstCellOscillates);
}

TEST_CASE("inductive semantics certifies stability without halting") {
  TmRunner r(make(gallery::write1_then_loop()), {});
  InductiveVerdict v = limits::inductive_run(r, {}, 100);
  REQUIRE(v.kind == InductiveVerdict::Kind::OutputStableCertified);
  CHECK(core::word_to_string(v.word) == "1");
  CHECK(testutil::certificate_replays(r, v.cycle->certificate));
}

TEST_CASE("classical halting certifies inductively via the halt fixed point") {
  TmRunner r(make(gallery::increment_machine()), core::word_from_chars("111"));
  InductiveVerdict v = limits::inductive_run(r, {}, 100);
  REQUIRE(v.kind == InductiveVerdict::Kind::OutputStableCertified);
  CHECK(core::word_to_string(v.word) == "1000");
}

TEST_CASE("certified rewriting cycles report OutputChanged") {
  TmRunner r(make(gallery::flip01()), {});
  InductiveVerdict v = limits::inductive_run(r, {}, 100);
  CHECK(v.kind == InductiveVerdict::Kind::OutputChanged);
}

TEST_CASE("budget exhaustion distinguishes quiet and busy tails") {
  // right-marcher never writes: quiet tail, heuristic stability.
  TmRunner quiet(make(gallery::right_marcher()), {});
  InductiveVerdict v = limits::inductive_run(quiet, {.maxSteps = 5000}, 1000);
  CHECK(v.kind == InductiveVerdict::Kind::OutputStableHeuristic);
  CHECK(v.window == 1000);
}

TEST_CASE("ittm rejects non-binary alphabets") {
  CHECK_THROWS_AS((void)limits::ittm_run(make(gallery::flip01()), {}, 1, {}),
                  limits::AlphabetNotBinary);
}

TEST_CASE("ittm limit stage takes the lim sup of a flipping cell") {
  IttmVerdict v = limits::ittm_run(make(gallery::flip_blank1()), {}, 1,
                                   {.maxSteps = 10000, .maxStoredFingerprints = 10000});
  REQUIRE(v.kind == IttmVerdict::Kind::OrdinalBudgetExhausted);
  REQUIRE(v.completedStages.size() == 1);
  CHECK(v.completedStages[0].limitCellOne == "1");
  CHECK(v.clock == limits::OrdinalClock{1, 0});
}

TEST_CASE("ittm all-blank looper keeps an all-blank limit, stage after stage") {
  IttmVerdict v = limits::ittm_run(make(gallery::loop_in_place()), {}, 3, {.maxSteps = 1000});
  REQUIRE(v.kind == IttmVerdict::Kind::OrdinalBudgetExhausted);
  REQUIRE(v.completedStages.size() == 3);
  for (const auto& stage : v.completedStages) {
    CHECK(stage.limitCellOne == core::kBlank);
    CHECK(stage.limitOutputWord.empty());
  }
}

TEST_CASE("two-phase machine halts one successor step after the limit") {
  IttmVerdict v = limits::ittm_run(make(gallery::two_phase()), {}, 4, {.maxSteps = 10000});
  REQUIRE(v.kind == IttmVerdict::Kind::HaltedAtOrdinal);
  CHECK(v.clock == limits::OrdinalClock{1, 1});
  REQUIRE(v.completedStages.size() == 1);
  CHECK(v.completedStages[0].limitCellOne == "1");
}

TEST_CASE("ittm reports uncertifiable stages honestly") {
  IttmVerdict v = limits::ittm_run(make(gallery::work_counter()), {}, 2, {.maxSteps = 2000});
  REQUIRE(v.kind == IttmVerdict::Kind::LimitStageUncertifiable);
  CHECK(v.uncertifiableStage == 0);
}
