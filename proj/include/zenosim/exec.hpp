#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zenosim/codec.hpp"
#include "zenosim/core.hpp"

namespace zenosim::exec {

enum class RunState : uint8_t {
  Running,
  Halted,
  StuckMissingRule,
  StuckBoundary,
};

std::string_view run_state_name(RunState s);

inline bool is_stuck(RunState s) {
  return s == RunState::StuckMissingRule || s == RunState::StuckBoundary;
}

struct OutputWrite {
  long position = 0;
  core::Symbol symbol;
  bool changed = false;
};

struct TraceRecord {
  uint64_t step = 0;
  std::string state;
  long inputHead = 1, workHead = 0, outputHead = 1;
  std::string inputWindow, workWindow, outputWindow;
  core::Symbol cellOne;
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(const TraceRecord& rec) = 0;
};

// Deterministic machine that the execution and limit semantics drive one
// step at a time. Equal fingerprints are cheap evidence of equal
// configurations; same_configuration is the exact check.
class SteppableMachine {
 public:
  virtual ~SteppableMachine() = default;

  virtual void reset() = 0;
  virtual RunState advance() = 0;  // no-op once halted or stuck
  virtual RunState run_state() const = 0;
  virtual uint64_t steps() const = 0;

  virtual std::pair<uint64_t, uint64_t> fingerprint() const = 0;
  virtual bool same_configuration(const SteppableMachine& other) const = 0;
  virtual std::unique_ptr<SteppableMachine> clone() const = 0;

  virtual core::Symbol first_output_cell() const = 0;
  virtual long output_head_position() const = 0;
  virtual core::Word output_word() const = 0;
  virtual std::optional<OutputWrite> last_output_write() const = 0;
  virtual uint64_t last_cell_one_change_step() const = 0;
  virtual uint64_t last_output_change_step() const = 0;

  virtual std::string label() const = 0;
  virtual TraceRecord sample(int radius) const = 0;
};

// Runner for transition-table machines.
class TmRunner : public SteppableMachine {
 public:
  TmRunner(std::shared_ptr<const core::Machine> machine, core::Word input);
  static TmRunner from_chars(std::shared_ptr<const core::Machine> machine,
                             std::string_view input);

  void reset() override;
  RunState advance() override;
  RunState run_state() const override { return state_; }
  uint64_t steps() const override { return config_.stepCount; }

  std::pair<uint64_t, uint64_t> fingerprint() const override;
  bool same_configuration(const SteppableMachine& other) const override;
  std::unique_ptr<SteppableMachine> clone() const override;

  core::Symbol first_output_cell() const override;
  long output_head_position() const override { return config_.outputHead; }
  core::Word output_word() const override;
  std::optional<OutputWrite> last_output_write() const override { return lastWrite_; }
  uint64_t last_cell_one_change_step() const override { return lastCellOneChange_; }
  uint64_t last_output_change_step() const override { return lastOutputChange_; }

  std::string label() const override;
  TraceRecord sample(int radius) const override;

  const core::Machine& machine() const { return *machine_; }
  const core::Configuration& config() const { return config_; }
  // Replaces the current configuration (tape hashes are recomputed) and
  // clears any halted/stuck latch.
  void set_configuration(core::Configuration config);

 private:
  TmRunner(std::shared_ptr<const core::Machine> machine, core::Word input,
           std::string charInput);

  std::shared_ptr<const core::Machine> machine_;
  core::Word input_;
  std::optional<std::string> charInput_;  // compact storage for long words
  std::optional<core::Configuration> resetPoint_;
  core::Configuration config_;
  RunState state_ = RunState::Running;
  std::optional<OutputWrite> lastWrite_;
  uint64_t lastCellOneChange_ = 0;
  uint64_t lastOutputChange_ = 0;
};

struct RunBudget {
  uint64_t maxSteps = 1'000'000;
  uint64_t maxStoredFingerprints = 1'000'000;
};

// Proof that the configuration at step entrySteps recurs period steps later.
// By determinism the run is eternally periodic from there on. Issued only
// after an exact replay check; not necessarily minimal.
struct CycleCertificate {
  uint64_t entrySteps = 0;  // mu
  uint64_t period = 1;      // lambda
  std::vector<core::Symbol> cellOneValues;     // cell 1 at steps mu..mu+lambda-1
  std::vector<long> outputHeadPositions;       // head at steps mu..mu+lambda-1
};

struct CertifiedCycle {
  CycleCertificate certificate;
  bool outputTapeConstant = true;  // no output cell changes value inside the period
};

struct RunVerdict {
  enum class Kind : uint8_t { HaltedWithOutput, StuckAt, CycleCertified, BudgetExhausted };
  Kind kind = Kind::BudgetExhausted;
  uint64_t steps = 0;
  core::Word outputWord;                  // HaltedWithOutput
  long outputHeadPosition = 1;            // final head position
  RunState stuckReason = RunState::Running;  // StuckAt
  std::optional<CertifiedCycle> cycle;    // CycleCertified
  core::Symbol lastCellOne = core::kBlank;
  uint64_t stepsSinceCellOneChanged = 0;
  uint64_t lastOutputChangeStep = 0;
};

struct RunOptions {
  TraceSink* sink = nullptr;
  uint64_t sampleEvery = 1;
  int traceRadius = 3;
};

// Resets m and drives it until it halts, gets stuck, a configuration repeat
// is certified, or the step budget runs out. Repeats are found by
// fingerprint hashing up to maxStoredFingerprints and by a Brent-style
// constant-memory scan beyond that; every candidate is re-verified by exact
// replay before a certificate is returned.
RunVerdict run(SteppableMachine& m, const RunBudget& budget, const RunOptions& opts = {});

// Exact replay check of a (mu, lambda) candidate. On success fills out (when
// non-null) with the observations recorded over one period.
bool verify_cycle(const SteppableMachine& m, uint64_t mu, uint64_t lambda,
                  CertifiedCycle* out);

enum class BoundedResult : uint8_t { Halted, StillRunning };

struct BoundedSimulation {
  BoundedResult result = BoundedResult::StillRunning;
  core::Word outputWord;   // when halted
  uint64_t stepsTaken = 0;
};

// Decodes bits (total via d-loop), runs the machine on the word for at most
// the given number of steps, and reports whether it reached a halt state.
// Words the decoded machine cannot read are treated as never halting.
BoundedSimulation bounded_simulate(const codec::BitString& machineBits,
                                   const core::Word& input, uint64_t steps);

struct OracleAnswer {
  enum class Kind : uint8_t { Halts, DivergesCertified, Unknown };
  Kind kind = Kind::Unknown;
  uint64_t haltSteps = 0;
  std::optional<CertifiedCycle> cycle;
};

// Desk-scale ground truth: never wrong when not Unknown.
OracleAnswer halting_oracle_small(const core::MachineDescription& desc,
                                  const core::Word& input, const RunBudget& budget);

}  // namespace zenosim::exec
