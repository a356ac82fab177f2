#include "zenosim/exec.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace zenosim::exec {

using core::Configuration;
using core::Machine;
using core::StepOutcome;
using core::Symbol;
using core::Word;

std::string_view run_state_name(RunState s) {
  switch (s) {
    case RunState::Running: return "Running";
    case RunState::Halted: return "Halted";
    case RunState::StuckMissingRule: return "StuckMissingRule";
    case RunState::StuckBoundary: return "StuckBoundary";
  }
  return "Unknown";
}

TmRunner::TmRunner(std::shared_ptr<const Machine> machine, Word input)
    : machine_(std::move(machine)), input_(std::move(input)) {
  reset();
}

TmRunner TmRunner::from_chars(std::shared_ptr<const Machine> machine, std::string_view input) {
  TmRunner runner(std::move(machine), Word{}, std::string(input));
  return runner;
}

TmRunner::TmRunner(std::shared_ptr<const Machine> machine, Word input, std::string charInput)
    : machine_(std::move(machine)), input_(std::move(input)), charInput_(std::move(charInput)) {
  reset();
}

void TmRunner::reset() {
  if (resetPoint_) {
    config_ = *resetPoint_;
  } else {
    config_ = charInput_ ? machine_->initial_configuration_chars(*charInput_)
                         : machine_->initial_configuration(input_);
  }
  state_ = machine_->in_halt_state(config_) ? RunState::Halted : RunState::Running;
  lastWrite_.reset();
  lastCellOneChange_ = 0;
  lastOutputChange_ = 0;
}

RunState TmRunner::advance() {
  if (state_ != RunState::Running) return state_;
  long writePos = config_.outputHead;
  uint16_t before = config_.outputTape.at(writePos);
  StepOutcome outcome = machine_->step(config_);
  switch (outcome) {
    case StepOutcome::Stepped: {
      uint16_t after = config_.outputTape.at(writePos);
      bool changed = after != before;
      lastWrite_ = OutputWrite{writePos, machine_->output_symbol_name(after), changed};
      if (changed) {
        lastOutputChange_ = config_.stepCount;
        if (writePos == 1) lastCellOneChange_ = config_.stepCount;
      }
      if (machine_->in_halt_state(config_)) state_ = RunState::Halted;
      break;
    }
    case StepOutcome::Halted:
      state_ = RunState::Halted;
      lastWrite_.reset();
      break;
    case StepOutcome::StuckMissingRule:
      state_ = RunState::StuckMissingRule;
      lastWrite_.reset();
      break;
    case StepOutcome::StuckBoundaryViolation:
      state_ = RunState::StuckBoundary;
      lastWrite_.reset();
      break;
  }
  return state_;
}

std::pair<uint64_t, uint64_t> TmRunner::fingerprint() const {
  return machine_->fingerprint(config_);
}

bool TmRunner::same_configuration(const SteppableMachine& other) const {
  const auto* rhs = dynamic_cast<const TmRunner*>(&other);
  if (!rhs || rhs->machine_.get() != machine_.get()) return false;
  return machine_->same_configuration(config_, rhs->config_);
}

std::unique_ptr<SteppableMachine> TmRunner::clone() const {
  return std::make_unique<TmRunner>(*this);
}

Symbol TmRunner::first_output_cell() const { return machine_->first_output_cell(config_); }

Word TmRunner::output_word() const { return machine_->output_word(config_); }

std::string TmRunner::label() const { return machine_->description().name; }

void TmRunner::set_configuration(Configuration config) {
  config_ = std::move(config);
  machine_->rehash(config_);
  resetPoint_ = config_;  // replays restart from here
  state_ = machine_->in_halt_state(config_) ? RunState::Halted : RunState::Running;
  lastWrite_.reset();
  lastCellOneChange_ = 0;
  lastOutputChange_ = 0;
}

TraceRecord TmRunner::sample(int radius) const {
  TraceRecord rec;
  rec.step = config_.stepCount;
  rec.state = machine_->state_name(config_.state);
  rec.inputHead = config_.inputHead;
  rec.workHead = config_.workHead;
  rec.outputHead = config_.outputHead;
  rec.cellOne = first_output_cell();
  const auto& m = *machine_;
  auto window = [&](const core::TapeArray& tape, long head, long minPos, auto&& name) {
    std::string s;
    for (long p = head - radius; p <= head + radius; ++p) {
      if (!s.empty()) s += ' ';
      if (p < minPos) {
        s += '|';
        continue;
      }
      if (p == head) s += '[';
      s += name(tape.at(p));
      if (p == head) s += ']';
    }
    return s;
  };
  rec.inputWindow = window(config_.inputTape, config_.inputHead, 1,
                           [&](uint16_t id) { return m.input_symbol_name(id); });
  rec.workWindow =
      window(config_.workTape, config_.workHead, std::numeric_limits<long>::min(),
             [&](uint16_t id) { return m.work_symbol_name(id); });
  rec.outputWindow = window(config_.outputTape, config_.outputHead, 1,
                            [&](uint16_t id) { return m.output_symbol_name(id); });
  return rec;
}

bool verify_cycle(const SteppableMachine& m, uint64_t mu, uint64_t lambda,
                  CertifiedCycle* out) {
  if (lambda == 0) return false;
  std::unique_ptr<SteppableMachine> probe = m.clone();
  probe->reset();
  for (uint64_t i = 0; i < mu; ++i) probe->advance();
  std::unique_ptr<SteppableMachine> snapshot = probe->clone();

  CertifiedCycle cycle;
  cycle.certificate.entrySteps = mu;
  cycle.certificate.period = lambda;
  cycle.certificate.cellOneValues.reserve(lambda);
  cycle.certificate.outputHeadPositions.reserve(lambda);
  for (uint64_t i = 0; i < lambda; ++i) {
    cycle.certificate.cellOneValues.push_back(probe->first_output_cell());
    cycle.certificate.outputHeadPositions.push_back(probe->output_head_position());
    probe->advance();
    if (auto w = probe->last_output_write(); w && w->changed) {
      cycle.outputTapeConstant = false;
    }
  }
  if (!probe->same_configuration(*snapshot)) return false;
  if (out) *out = std::move(cycle);
  return true;
}

RunVerdict run(SteppableMachine& m, const RunBudget& budget, const RunOptions& opts) {
  m.reset();

  RunVerdict verdict;
  std::unordered_map<uint64_t, std::pair<uint64_t, uint64_t>> seen;
  seen.reserve(std::min<uint64_t>(budget.maxStoredFingerprints, 1 << 20));

  bool brentActive = false;
  std::pair<uint64_t, uint64_t> anchorFp{0, 0};
  uint64_t anchorStep = 0;
  uint64_t power = 1;
  uint64_t lam = 0;

  auto finishEvidence = [&](RunVerdict& v) {
    v.steps = m.steps();
    v.outputHeadPosition = m.output_head_position();
    v.lastCellOne = m.first_output_cell();
    v.stepsSinceCellOneChanged = m.steps() - m.last_cell_one_change_step();
    v.lastOutputChangeStep = m.last_output_change_step();
  };

  while (true) {
    RunState state = m.run_state();
    if (state == RunState::Halted) {
      verdict.kind = RunVerdict::Kind::HaltedWithOutput;
      verdict.outputWord = m.output_word();
      finishEvidence(verdict);
      return verdict;
    }
    if (is_stuck(state)) {
      verdict.kind = RunVerdict::Kind::StuckAt;
      verdict.stuckReason = state;
      verdict.outputWord = m.output_word();
      finishEvidence(verdict);
      return verdict;
    }

    uint64_t t = m.steps();
    if (opts.sink && opts.sampleEvery > 0 && t % opts.sampleEvery == 0) {
      opts.sink->record(m.sample(opts.traceRadius));
    }
    if (t >= budget.maxSteps) {
      verdict.kind = RunVerdict::Kind::BudgetExhausted;
      finishEvidence(verdict);
      return verdict;
    }

    std::pair<uint64_t, uint64_t> fp = m.fingerprint();
    if (!brentActive && seen.size() < budget.maxStoredFingerprints) {
      auto [it, inserted] = seen.try_emplace(fp.first, std::make_pair(fp.second, t));
      if (!inserted && it->second.first == fp.second) {
        uint64_t mu = it->second.second;
        CertifiedCycle cycle;
        if (verify_cycle(m, mu, t - mu, &cycle)) {
          verdict.kind = RunVerdict::Kind::CycleCertified;
          verdict.cycle = std::move(cycle);
          finishEvidence(verdict);
          return verdict;
        }
      }
    } else {
      if (!brentActive) {
        brentActive = true;
        anchorFp = fp;
        anchorStep = t;
        power = 1;
        lam = 0;
      } else {
        ++lam;
        if (fp == anchorFp) {
          CertifiedCycle cycle;
          if (verify_cycle(m, anchorStep, t - anchorStep, &cycle)) {
            verdict.kind = RunVerdict::Kind::CycleCertified;
            verdict.cycle = std::move(cycle);
            finishEvidence(verdict);
            return verdict;
          }
        }
        if (lam == power) {
          power *= 2;
          lam = 0;
          anchorFp = fp;
          anchorStep = t;
        }
      }
    }

    m.advance();
  }
}

BoundedSimulation bounded_simulate(const codec::BitString& machineBits, const Word& input,
                                   uint64_t steps) {
  BoundedSimulation sim;
  auto machine = std::make_shared<const Machine>(codec::decode(machineBits));
  Configuration config;
  try {
    config = machine->initial_configuration(input);
  } catch (const core::InvalidInputSymbol&) {
    return sim;  // unreadable input: never reaches a halt state
  }
  for (uint64_t i = 0; i < steps; ++i) {
    StepOutcome outcome = machine->step(config);
    if (outcome == StepOutcome::Halted) break;
    if (core::is_stuck(outcome)) {
      sim.stepsTaken = config.stepCount;
      return sim;
    }
    if (machine->in_halt_state(config)) break;
  }
  sim.stepsTaken = config.stepCount;
  if (machine->in_halt_state(config)) {
    sim.result = BoundedResult::Halted;
    sim.outputWord = machine->output_word(config);
  }
  return sim;
}

OracleAnswer halting_oracle_small(const core::MachineDescription& desc, const Word& input,
                                  const RunBudget& budget) {
  OracleAnswer answer;
  auto machine = std::make_shared<const Machine>(desc);
  TmRunner runner(machine, input);
  RunVerdict verdict = run(runner, budget);
  switch (verdict.kind) {
    case RunVerdict::Kind::HaltedWithOutput:
      answer.kind = OracleAnswer::Kind::Halts;
      answer.haltSteps = verdict.steps;
      break;
    case RunVerdict::Kind::CycleCertified:
      answer.kind = OracleAnswer::Kind::DivergesCertified;
      answer.cycle = verdict.cycle;
      break;
    case RunVerdict::Kind::StuckAt: {
      // A stuck configuration is a fixed point of the step function, hence a
      // certified 1-cycle and a sound divergence witness.
      CertifiedCycle cycle;
      if (verify_cycle(runner, verdict.steps, 1, &cycle)) {
        answer.kind = OracleAnswer::Kind::DivergesCertified;
        answer.cycle = std::move(cycle);
      }
      break;
    }
    case RunVerdict::Kind::BudgetExhausted:
      break;
  }
  return answer;
}

}  // namespace zenosim::exec
