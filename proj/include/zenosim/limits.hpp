#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zenosim/exec.hpp"

namespace zenosim::limits {

// Outcome of a run judged by its configuration limit. A machine computes a
// bit exactly when the whole output tape stabilizes, the output head comes
// to rest over cell 2 and cell 1 carries the value. A first cell that keeps
// changing puts the input outside the computed function's domain.
struct ZenoVerdict {
  enum class Kind : uint8_t {
    ClassicallyHalted,
    LimitStabilized,
    FirstCellOscillates,
    OutputHeadUnstable,
    Undetermined,
  };
  Kind kind = Kind::Undetermined;

  // ClassicallyHalted
  core::Word outputWord;
  long outputHeadPosition = 1;
  bool computesBit = false;

  // ClassicallyHalted and LimitStabilized both carry the first-cell value.
  core::Symbol cellOneValue = core::kBlank;

  // Certified arms
  std::optional<exec::CertifiedCycle> cycle;

  // Undetermined evidence
  core::Symbol lastCellOne = core::kBlank;
  uint64_t stepsSinceCellOneChanged = 0;

  uint64_t stepsRun = 0;
};

std::string_view zeno_kind_name(ZenoVerdict::Kind k);

ZenoVerdict zeno_run(exec::SteppableMachine& m, const exec::RunBudget& budget);

// Classification used by zeno_run, exposed so certificates can be re-judged
// from their recorded cycle data alone.
ZenoVerdict::Kind classify_cycle(const exec::CertifiedCycle& cycle);

struct InductiveVerdict {
  enum class Kind : uint8_t {
    OutputStableCertified,
    OutputStableHeuristic,  // quiet for >= window steps at budget end; fallible
    OutputChanged,          // certified cycle keeps rewriting the output tape
    Undetermined,
  };
  Kind kind = Kind::Undetermined;
  core::Word word;
  uint64_t sinceStep = 0;  // step of the last output-tape change
  uint64_t window = 0;
  std::optional<exec::CertifiedCycle> cycle;
  uint64_t lastChangeStep = 0;
  uint64_t stepsRun = 0;
};

std::string_view inductive_kind_name(InductiveVerdict::Kind k);

InductiveVerdict inductive_run(exec::SteppableMachine& m, const exec::RunBudget& budget,
                               uint64_t stabilityWindow);

// Ordinal omega*limitStages + successorSteps.
struct OrdinalClock {
  uint64_t limitStages = 0;
  uint64_t successorSteps = 0;
  bool operator==(const OrdinalClock&) const = default;
};

struct CompletedStage {
  uint64_t stageIndex = 0;
  exec::CycleCertificate certificate;  // licenses the stage's lim-sup tape
  core::Symbol limitCellOne = core::kBlank;
  core::Word limitOutputWord;
  uint64_t successorStepsTaken = 0;  // steps run inside this stage
};

struct IttmVerdict {
  enum class Kind : uint8_t {
    HaltedAtOrdinal,
    LimitStageUncertifiable,  // the stage found no repeat within budget
    OrdinalBudgetExhausted,
  };
  Kind kind = Kind::OrdinalBudgetExhausted;
  OrdinalClock clock;
  core::Word outputWord;
  uint64_t uncertifiableStage = 0;
  std::vector<CompletedStage> completedStages;
};

std::string_view ittm_kind_name(IttmVerdict::Kind k);

struct AlphabetNotBinary : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Successor steps are ordinary steps; at each certified stage end the tape
// becomes the cellwise lim sup over one period ('1' where the cell is ever
// '1', blank otherwise), the heads return to the tape starts and the state
// returns to the start state. Requires every tape alphabet to be a subset
// of {blank, 1}, blank playing 0.
IttmVerdict ittm_run(std::shared_ptr<const core::Machine> machine, const core::Word& input,
                     uint64_t maxLimitStages, const exec::RunBudget& perStageBudget);

}  // namespace zenosim::limits
