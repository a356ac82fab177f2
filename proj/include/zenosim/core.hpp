#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace zenosim::core {

// Tape symbols are whitespace-free tokens; "_" is the blank that belongs to
// every tape alphabet.
using Symbol = std::string;
inline const Symbol kBlank = "_";

using Word = std::vector<Symbol>;

// One symbol per character; '_' maps to blank.
Word word_from_chars(std::string_view text);
std::string word_to_string(const Word& word);

enum class Move : uint8_t { Left, Right, Stay };

char move_char(Move m);
std::optional<Move> move_from_char(char c);

// Lookup key of a transition: current state plus the symbol under each head.
struct RuleKey {
  std::string state;
  Symbol readInput;
  Symbol readWork;
  Symbol readOutput;
  auto operator<=>(const RuleKey&) const = default;
};

// Effect of a transition. The input tape is read-only, so there is no input
// write field.
struct RuleAction {
  std::string nextState;
  Symbol writeWork;
  Symbol writeOutput;
  Move moveInput = Move::Stay;
  Move moveWork = Move::Stay;
  Move moveOutput = Move::Stay;
  bool operator==(const RuleAction&) const = default;
};

struct TransitionRule {
  RuleKey key;
  RuleAction action;
  bool operator==(const TransitionRule&) const = default;
};

// Finite control of a deterministic machine with one read-only input tape,
// one two-way work tape and one one-way output tape.
struct MachineDescription {
  std::string name;
  std::set<Symbol> inputAlphabet;
  std::set<Symbol> workAlphabet;
  std::set<Symbol> outputAlphabet;
  std::set<std::string> states;
  std::string startState;
  std::set<std::string> haltStates;
  std::vector<TransitionRule> rules;

  bool operator==(const MachineDescription&) const = default;
};

enum class Defect : uint8_t {
  MissingBlank,
  EmptyName,
  StartStateUndeclared,
  HaltStateUndeclared,
  UndeclaredState,
  UndeclaredSymbol,
  RuleOnHaltState,
  NondeterminismViolation,
};

std::string_view defect_name(Defect d);

struct ValidationIssue {
  Defect defect;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Lists every violated well-formedness invariant; empty report iff valid.
ValidationReport validate(const MachineDescription& desc);

// Dense tape storage. Cells hold interned symbol ids; id 0 is always blank.
// Cells outside the allocated span are blank.
struct TapeArray {
  std::vector<uint16_t> cells;
  long origin = 0;  // tape index of cells[0]

  uint16_t at(long pos) const {
    long off = pos - origin;
    if (off < 0 || off >= static_cast<long>(cells.size())) return 0;
    return cells[static_cast<size_t>(off)];
  }
  void set(long pos, uint16_t value);

  // Smallest/largest non-blank position, if any.
  std::optional<long> first_nonblank() const;
  std::optional<long> last_nonblank() const;

  // Equality of tape contents, ignoring how much blank padding is stored.
  bool same_content(const TapeArray& other) const;
};

// Full instantaneous description of a run. Input and output tapes are
// one-way infinite starting at cell 1; the work tape is two-way infinite.
// tapeHash* is a Zobrist hash over non-blank work/output cells, maintained
// incrementally by Machine::step.
struct Configuration {
  uint32_t state = 0;
  TapeArray inputTape;
  TapeArray workTape;
  TapeArray outputTape;
  long inputHead = 1;
  long workHead = 0;
  long outputHead = 1;
  uint64_t stepCount = 0;
  uint64_t tapeHashLo = 0;
  uint64_t tapeHashHi = 0;
};

enum class StepOutcome : uint8_t {
  Stepped,
  Halted,
  StuckMissingRule,
  StuckBoundaryViolation,
};

inline bool is_stuck(StepOutcome o) {
  return o == StepOutcome::StuckMissingRule ||
         o == StepOutcome::StuckBoundaryViolation;
}

struct InvalidInputSymbol : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Executable form of a validated MachineDescription: interned states and
// symbols plus a flat transition table. Immutable once built and freely
// shared between concurrent runs; each Configuration belongs to one run.
class Machine {
 public:
  // Throws std::invalid_argument when the description does not validate.
  explicit Machine(MachineDescription desc);

  const MachineDescription& description() const { return desc_; }

  Configuration initial_configuration(const Word& input) const;
  // Fast path for long inputs: one symbol per character.
  Configuration initial_configuration_chars(std::string_view input) const;

  StepOutcome step(Configuration& config) const;

  bool in_halt_state(const Configuration& config) const {
    return haltStateMask_[config.state] != 0;
  }

  Symbol first_output_cell(const Configuration& config) const {
    return outputSymbols_[config.outputTape.at(1)];
  }

  // Output tape cells 1..last-non-blank as a word.
  Word output_word(const Configuration& config) const;

  const std::string& state_name(uint32_t id) const { return stateNames_[id]; }
  const Symbol& input_symbol_name(uint16_t id) const { return inputSymbols_[id]; }
  const Symbol& work_symbol_name(uint16_t id) const { return workSymbols_[id]; }
  const Symbol& output_symbol_name(uint16_t id) const { return outputSymbols_[id]; }
  uint32_t state_count() const { return static_cast<uint32_t>(stateNames_.size()); }

  // Identical state, heads and tape contents; the step counter is ignored so
  // that revisited configurations compare equal.
  bool same_configuration(const Configuration& a, const Configuration& b) const;

  // Hash of (state, heads, non-blank tape cells); step count excluded.
  std::pair<uint64_t, uint64_t> fingerprint(const Configuration& config) const;

  // Recomputes the incremental tape hashes from scratch. Needed after a
  // configuration is edited directly (limit stages do this).
  void rehash(Configuration& config) const;

 private:
  friend class MachineBuilderAccess;

  int32_t lookup(uint32_t state, uint16_t in, uint16_t work, uint16_t out) const;

  MachineDescription desc_;
  std::vector<std::string> stateNames_;
  std::vector<Symbol> inputSymbols_, workSymbols_, outputSymbols_;
  std::vector<uint8_t> haltStateMask_;
  uint32_t startState_ = 0;

  struct Action {
    uint32_t next;
    uint16_t writeWork;
    uint16_t writeOutput;
    int8_t moveInput;
    int8_t moveWork;
    int8_t moveOutput;
  };
  std::vector<Action> actions_;
  // Dense table when the key space is small, hash map otherwise.
  std::vector<int32_t> dense_;
  bool useDense_ = true;
  std::unordered_map<uint64_t, int32_t> sparse_;
  size_t nIn_ = 0, nWork_ = 0, nOut_ = 0;

  uint16_t input_id(const Symbol& s) const;
};

}  // namespace zenosim::core
