#include "zenosim/limits.hpp"

#include <set>

namespace zenosim::limits {

using exec::CertifiedCycle;
using exec::RunBudget;
using exec::RunVerdict;
using exec::SteppableMachine;
using exec::TmRunner;

std::string_view zeno_kind_name(ZenoVerdict::Kind k) {
  switch (k) {
    case ZenoVerdict::Kind::ClassicallyHalted: return "ClassicallyHalted";
    case ZenoVerdict::Kind::LimitStabilized: return "LimitStabilized";
    case ZenoVerdict::Kind::FirstCellOscillates: return "FirstCellOscillates";
    case ZenoVerdict::Kind::OutputHeadUnstable: return "OutputHeadUnstable";
    case ZenoVerdict::Kind::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

std::string_view inductive_kind_name(InductiveVerdict::Kind k) {
  switch (k) {
    case InductiveVerdict::Kind::OutputStableCertified: return "OutputStableCertified";
    case InductiveVerdict::Kind::OutputStableHeuristic: return "OutputStableHeuristic";
    case InductiveVerdict::Kind::OutputChanged: return "OutputChanged";
    case InductiveVerdict::Kind::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

std::string_view ittm_kind_name(IttmVerdict::Kind k) {
  switch (k) {
    case IttmVerdict::Kind::HaltedAtOrdinal: return "HaltedAtOrdinal";
    case IttmVerdict::Kind::LimitStageUncertifiable: return "LimitStageUncertifiable";
    case IttmVerdict::Kind::OrdinalBudgetExhausted: return "OrdinalBudgetExhausted";
  }
  return "Unknown";
}

ZenoVerdict::Kind classify_cycle(const CertifiedCycle& cycle) {
  const auto& cells = cycle.certificate.cellOneValues;
  bool cellOneConstant = true;
  for (size_t i = 1; i < cells.size(); ++i) {
    if (cells[i] != cells[0]) {
      cellOneConstant = false;
      break;
    }
  }
  // First-cell oscillation dominates head behavior.
  if (!cellOneConstant) return ZenoVerdict::Kind::FirstCellOscillates;
  bool headAlwaysTwo = true;
  for (long p : cycle.certificate.outputHeadPositions) {
    if (p != 2) {
      headAlwaysTwo = false;
      break;
    }
  }
  if (cycle.outputTapeConstant && headAlwaysTwo) return ZenoVerdict::Kind::LimitStabilized;
  return ZenoVerdict::Kind::OutputHeadUnstable;
}

namespace {

ZenoVerdict from_cycle(CertifiedCycle cycle, const RunVerdict& r) {
  ZenoVerdict v;
  v.kind = classify_cycle(cycle);
  if (v.kind == ZenoVerdict::Kind::LimitStabilized) {
    v.cellOneValue = cycle.certificate.cellOneValues.front();
  }
  v.cycle = std::move(cycle);
  v.stepsRun = r.steps;
  return v;
}

}  // namespace

ZenoVerdict zeno_run(SteppableMachine& m, const RunBudget& budget) {
  RunVerdict r = exec::run(m, budget);
  ZenoVerdict v;
  switch (r.kind) {
    case RunVerdict::Kind::HaltedWithOutput: {
      v.kind = ZenoVerdict::Kind::ClassicallyHalted;
      v.outputWord = r.outputWord;
      v.outputHeadPosition = r.outputHeadPosition;
      v.computesBit = r.outputHeadPosition == 2;
      v.cellOneValue = m.first_output_cell();
      v.stepsRun = r.steps;
      return v;
    }
    case RunVerdict::Kind::StuckAt: {
      // A stuck configuration repeats forever, so the limit exists; judge it
      // by the same cycle rules.
      CertifiedCycle cycle;
      if (exec::verify_cycle(m, r.steps, 1, &cycle)) return from_cycle(std::move(cycle), r);
      v.kind = ZenoVerdict::Kind::Undetermined;
      v.lastCellOne = r.lastCellOne;
      v.stepsSinceCellOneChanged = r.stepsSinceCellOneChanged;
      v.stepsRun = r.steps;
      return v;
    }
    case RunVerdict::Kind::CycleCertified:
      return from_cycle(std::move(*r.cycle), r);
    case RunVerdict::Kind::BudgetExhausted:
    default: {
      v.kind = ZenoVerdict::Kind::Undetermined;
      v.lastCellOne = r.lastCellOne;
      v.stepsSinceCellOneChanged = r.stepsSinceCellOneChanged;
      v.stepsRun = r.steps;
      return v;
    }
  }
}

InductiveVerdict inductive_run(SteppableMachine& m, const RunBudget& budget,
                               uint64_t stabilityWindow) {
  RunVerdict r = exec::run(m, budget);
  InductiveVerdict v;
  v.window = stabilityWindow;
  v.stepsRun = r.steps;
  v.lastChangeStep = r.lastOutputChangeStep;

  auto certify_fixed_point = [&]() -> bool {
    CertifiedCycle cycle;
    if (!exec::verify_cycle(m, r.steps, 1, &cycle)) return false;
    v.kind = InductiveVerdict::Kind::OutputStableCertified;
    v.word = m.output_word();
    v.sinceStep = r.lastOutputChangeStep;
    v.cycle = std::move(cycle);
    return true;
  };

  switch (r.kind) {
    case RunVerdict::Kind::HaltedWithOutput:
    case RunVerdict::Kind::StuckAt:
      if (certify_fixed_point()) return v;
      v.kind = InductiveVerdict::Kind::Undetermined;
      return v;
    case RunVerdict::Kind::CycleCertified:
      if (r.cycle->outputTapeConstant) {
        v.kind = InductiveVerdict::Kind::OutputStableCertified;
        v.word = m.output_word();
        v.sinceStep = r.lastOutputChangeStep;
        v.cycle = std::move(r.cycle);
      } else {
        // The certified cycle rewrites the output tape every period, so the
        // output never settles.
        v.kind = InductiveVerdict::Kind::OutputChanged;
        v.cycle = std::move(r.cycle);
      }
      return v;
    case RunVerdict::Kind::BudgetExhausted:
    default:
      if (r.steps - r.lastOutputChangeStep >= stabilityWindow) {
        v.kind = InductiveVerdict::Kind::OutputStableHeuristic;
        v.word = m.output_word();
        v.sinceStep = r.lastOutputChangeStep;
      } else {
        v.kind = InductiveVerdict::Kind::Undetermined;
      }
      return v;
  }
}

namespace {

void require_binary(const core::MachineDescription& desc) {
  auto check = [&](const std::set<core::Symbol>& alpha, const char* which) {
    for (const auto& s : alpha) {
      if (s != core::kBlank && s != "1") {
        throw AlphabetNotBinary(std::string("AlphabetNotBinary: ") + which +
                                " alphabet contains '" + s +
                                "'; only blank (as 0) and '1' are allowed");
      }
    }
  };
  check(desc.inputAlphabet, "input");
  check(desc.workAlphabet, "work");
  check(desc.outputAlphabet, "output");
}

}  // namespace

IttmVerdict ittm_run(std::shared_ptr<const core::Machine> machine, const core::Word& input,
                     uint64_t maxLimitStages, const RunBudget& perStageBudget) {
  require_binary(machine->description());
  IttmVerdict verdict;

  TmRunner runner(machine, input);
  for (uint64_t stage = 0;; ++stage) {
    RunVerdict r = exec::run(runner, perStageBudget);

    if (r.kind != RunVerdict::Kind::HaltedWithOutput && stage >= maxLimitStages) {
      verdict.kind = IttmVerdict::Kind::OrdinalBudgetExhausted;
      verdict.clock = {stage, 0};
      return verdict;
    }
    if (r.kind == RunVerdict::Kind::HaltedWithOutput) {
      verdict.kind = IttmVerdict::Kind::HaltedAtOrdinal;
      verdict.clock = {stage, r.steps};
      verdict.outputWord = r.outputWord;
      return verdict;
    }

    CertifiedCycle cycle;
    if (r.kind == RunVerdict::Kind::CycleCertified) {
      cycle = std::move(*r.cycle);
    } else if (r.kind == RunVerdict::Kind::StuckAt &&
               exec::verify_cycle(runner, r.steps, 1, &cycle)) {
      // frozen configuration: constant tail, lim sup well defined
    } else {
      verdict.kind = IttmVerdict::Kind::LimitStageUncertifiable;
      verdict.uncertifiableStage = stage;
      verdict.clock = {stage, r.steps};
      return verdict;
    }

    // Lim sup over one period: a cell is '1' at the limit iff it is '1' at
    // some step of the certified cycle; within a periodic tail that equals
    // being '1' cofinally often.
    std::set<long> workOnes, outputOnes;
    {
      std::unique_ptr<exec::SteppableMachine> probeBase = runner.clone();
      probeBase->reset();
      for (uint64_t i = 0; i < cycle.certificate.entrySteps; ++i) probeBase->advance();
      auto* probe = dynamic_cast<TmRunner*>(probeBase.get());
      for (uint64_t i = 0; i < cycle.certificate.period; ++i) {
        const core::Configuration& c = probe->config();
        auto collect = [&](const core::TapeArray& tape, std::set<long>& into,
                           auto&& nameOf) {
          for (size_t j = 0; j < tape.cells.size(); ++j) {
            if (tape.cells[j] == 0) continue;
            if (nameOf(tape.cells[j]) == "1") into.insert(tape.origin + static_cast<long>(j));
          }
        };
        collect(c.workTape, workOnes,
                [&](uint16_t id) { return machine->work_symbol_name(id); });
        collect(c.outputTape, outputOnes,
                [&](uint16_t id) { return machine->output_symbol_name(id); });
        probe->advance();
      }
    }

    core::Configuration limit = machine->initial_configuration(input);
    auto idOfOne = [](auto&& nameOf) -> uint16_t {
      for (uint16_t i = 0;; ++i) {
        if (nameOf(i) == "1") return i;
      }
    };
    if (!workOnes.empty()) {
      uint16_t one =
          idOfOne([&](uint16_t i) -> const core::Symbol& { return machine->work_symbol_name(i); });
      for (long p : workOnes) limit.workTape.set(p, one);
    }
    if (!outputOnes.empty()) {
      uint16_t one = idOfOne(
          [&](uint16_t i) -> const core::Symbol& { return machine->output_symbol_name(i); });
      for (long p : outputOnes) limit.outputTape.set(p, one);
    }

    CompletedStage done;
    done.stageIndex = stage;
    done.certificate = cycle.certificate;
    done.limitCellOne = machine->first_output_cell(limit);
    done.limitOutputWord = machine->output_word(limit);
    done.successorStepsTaken = r.steps;
    verdict.completedStages.push_back(std::move(done));

    runner.set_configuration(std::move(limit));
  }
}

}  // namespace zenosim::limits
