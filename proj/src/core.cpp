#include "zenosim/core.hpp"

#include <algorithm>
#include <unordered_set>

namespace zenosim::core {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Zobrist key for a (tape, cell, symbol) triple, derived on the fly so no
// table has to be sized up front.
uint64_t zkey(uint64_t salt, int tape, long pos, uint16_t sym) {
  uint64_t h = salt;
  h = splitmix64(h ^ static_cast<uint64_t>(tape) * 0xa24baed4963ee407ULL);
  h = splitmix64(h ^ static_cast<uint64_t>(pos) * 0x9fb21c651e98df25ULL);
  h = splitmix64(h ^ static_cast<uint64_t>(sym));
  return h;
}

constexpr uint64_t kSaltLo = 0x5bd1e995u;
constexpr uint64_t kSaltHi = 0xc2b2ae3d27d4eb4fULL;

constexpr int kTapeWork = 1;
constexpr int kTapeOutput = 2;

int8_t move_delta(Move m) {
  switch (m) {
    case Move::Left: return -1;
    case Move::Right: return 1;
    case Move::Stay: return 0;
  }
  return 0;
}

template <typename Set, typename Fn>
uint16_t intern_alphabet(const Set& alphabet, std::vector<Symbol>& names, Fn&& idOf) {
  names.clear();
  names.push_back(kBlank);
  for (const Symbol& s : alphabet) {
    if (s != kBlank) names.push_back(s);
  }
  for (uint16_t i = 0; i < names.size(); ++i) idOf(names[i], i);
  return static_cast<uint16_t>(names.size());
}

}  // namespace

Word word_from_chars(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) w.push_back(Symbol(1, c));
  return w;
}

std::string word_to_string(const Word& word) {
  std::string out;
  for (const Symbol& s : word) out += s;
  return out;
}

char move_char(Move m) {
  switch (m) {
    case Move::Left: return 'L';
    case Move::Right: return 'R';
    case Move::Stay: return 'S';
  }
  return '?';
}

std::optional<Move> move_from_char(char c) {
  switch (c) {
    case 'L': return Move::Left;
    case 'R': return Move::Right;
    case 'S': return Move::Stay;
    default: return std::nullopt;
  }
}

std::string_view defect_name(Defect d) {
  switch (d) {
    case Defect::MissingBlank: return "MissingBlank";
    case Defect::EmptyName: return "EmptyName";
    case Defect::StartStateUndeclared: return "StartStateUndeclared";
    case Defect::HaltStateUndeclared: return "HaltStateUndeclared";
    case Defect::UndeclaredState: return "UndeclaredState";
    case Defect::UndeclaredSymbol: return "UndeclaredSymbol";
    case Defect::RuleOnHaltState: return "RuleOnHaltState";
    case Defect::NondeterminismViolation: return "NondeterminismViolation";
  }
  return "Unknown";
}

ValidationReport validate(const MachineDescription& desc) {
  ValidationReport report;
  auto add = [&](Defect d, std::string detail) {
    report.issues.push_back({d, std::move(detail)});
  };

  if (desc.name.empty()) add(Defect::EmptyName, "machine has no name");
  for (const auto* alpha : {&desc.inputAlphabet, &desc.workAlphabet, &desc.outputAlphabet}) {
    if (!alpha->count(kBlank)) {
      const char* which = alpha == &desc.inputAlphabet ? "input"
                          : alpha == &desc.workAlphabet ? "work"
                                                        : "output";
      add(Defect::MissingBlank, std::string(which) + " alphabet lacks blank");
    }
  }
  if (!desc.states.count(desc.startState)) {
    add(Defect::StartStateUndeclared, "start state '" + desc.startState + "' not declared");
  }
  for (const auto& h : desc.haltStates) {
    if (!desc.states.count(h)) {
      add(Defect::HaltStateUndeclared, "halt state '" + h + "' not declared");
    }
  }

  auto checkState = [&](const std::string& s, const char* role) {
    if (!desc.states.count(s)) add(Defect::UndeclaredState, std::string(role) + " '" + s + "'");
  };
  auto checkSymbol = [&](const std::set<Symbol>& alpha, const Symbol& s, const char* role) {
    if (!alpha.count(s)) add(Defect::UndeclaredSymbol, std::string(role) + " '" + s + "'");
  };

  std::set<RuleKey> seen;
  for (const TransitionRule& r : desc.rules) {
    checkState(r.key.state, "rule state");
    checkState(r.action.nextState, "rule next state");
    checkSymbol(desc.inputAlphabet, r.key.readInput, "rule input read");
    checkSymbol(desc.workAlphabet, r.key.readWork, "rule work read");
    checkSymbol(desc.outputAlphabet, r.key.readOutput, "rule output read");
    checkSymbol(desc.workAlphabet, r.action.writeWork, "rule work write");
    checkSymbol(desc.outputAlphabet, r.action.writeOutput, "rule output write");
    if (desc.haltStates.count(r.key.state)) {
      add(Defect::RuleOnHaltState, "rule keyed on halt state '" + r.key.state + "'");
    }
    if (!seen.insert(r.key).second) {
      add(Defect::NondeterminismViolation,
          "duplicate rule key (" + r.key.state + ", " + r.key.readInput + ", " +
              r.key.readWork + ", " + r.key.readOutput + ")");
    }
  }
  return report;
}

void TapeArray::set(long pos, uint16_t value) {
  long off = pos - origin;
  if (cells.empty()) {
    origin = pos;
    cells.push_back(value);
    return;
  }
  if (off < 0) {
    cells.insert(cells.begin(), static_cast<size_t>(-off), 0);
    origin = pos;
    off = 0;
  } else if (off >= static_cast<long>(cells.size())) {
    cells.resize(static_cast<size_t>(off) + 1, 0);
  }
  cells[static_cast<size_t>(off)] = value;
}

std::optional<long> TapeArray::first_nonblank() const {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] != 0) return origin + static_cast<long>(i);
  }
  return std::nullopt;
}

std::optional<long> TapeArray::last_nonblank() const {
  for (size_t i = cells.size(); i-- > 0;) {
    if (cells[i] != 0) return origin + static_cast<long>(i);
  }
  return std::nullopt;
}

bool TapeArray::same_content(const TapeArray& other) const {
  auto lo1 = first_nonblank(), lo2 = other.first_nonblank();
  if (lo1.has_value() != lo2.has_value()) return false;
  if (!lo1) return true;
  auto hi1 = last_nonblank(), hi2 = other.last_nonblank();
  if (*lo1 != *lo2 || *hi1 != *hi2) return false;
  for (long p = *lo1; p <= *hi1; ++p) {
    if (at(p) != other.at(p)) return false;
  }
  return true;
}

Machine::Machine(MachineDescription desc) : desc_(std::move(desc)) {
  ValidationReport report = validate(desc_);
  if (!report.ok()) {
    std::string msg = "invalid machine '" + desc_.name + "':";
    for (const auto& issue : report.issues) {
      msg += " [";
      msg += defect_name(issue.defect);
      msg += "] ";
      msg += issue.detail;
      msg += ";";
    }
    throw std::invalid_argument(msg);
  }

  std::unordered_map<std::string, uint32_t> stateIds;
  stateNames_.reserve(desc_.states.size());
  for (const auto& s : desc_.states) {
    stateIds[s] = static_cast<uint32_t>(stateNames_.size());
    stateNames_.push_back(s);
  }
  startState_ = stateIds.at(desc_.startState);
  haltStateMask_.assign(stateNames_.size(), 0);
  for (const auto& h : desc_.haltStates) haltStateMask_[stateIds.at(h)] = 1;

  std::unordered_map<Symbol, uint16_t> inIds, workIds, outIds;
  nIn_ = intern_alphabet(desc_.inputAlphabet, inputSymbols_,
                         [&](const Symbol& s, uint16_t i) { inIds[s] = i; });
  nWork_ = intern_alphabet(desc_.workAlphabet, workSymbols_,
                           [&](const Symbol& s, uint16_t i) { workIds[s] = i; });
  nOut_ = intern_alphabet(desc_.outputAlphabet, outputSymbols_,
                          [&](const Symbol& s, uint16_t i) { outIds[s] = i; });

  size_t keySpace = stateNames_.size() * nIn_ * nWork_ * nOut_;
  useDense_ = keySpace <= (1u << 26);
  if (useDense_) dense_.assign(keySpace, -1);

  actions_.reserve(desc_.rules.size());
  for (const TransitionRule& r : desc_.rules) {
    Action a;
    a.next = stateIds.at(r.action.nextState);
    a.writeWork = workIds.at(r.action.writeWork);
    a.writeOutput = outIds.at(r.action.writeOutput);
    a.moveInput = move_delta(r.action.moveInput);
    a.moveWork = move_delta(r.action.moveWork);
    a.moveOutput = move_delta(r.action.moveOutput);
    int32_t idx = static_cast<int32_t>(actions_.size());
    actions_.push_back(a);

    uint64_t key = ((static_cast<uint64_t>(stateIds.at(r.key.state)) * nIn_ +
                     inIds.at(r.key.readInput)) *
                        nWork_ +
                    workIds.at(r.key.readWork)) *
                       nOut_ +
                   outIds.at(r.key.readOutput);
    if (useDense_) {
      dense_[key] = idx;
    } else {
      sparse_[key] = idx;
    }
  }
}

uint16_t Machine::input_id(const Symbol& s) const {
  for (uint16_t i = 0; i < inputSymbols_.size(); ++i) {
    if (inputSymbols_[i] == s) return i;
  }
  throw InvalidInputSymbol("symbol '" + s + "' is not in the input alphabet of '" +
                           desc_.name + "'");
}

Configuration Machine::initial_configuration(const Word& input) const {
  Configuration c;
  c.state = startState_;
  c.inputTape.origin = 1;
  c.inputTape.cells.reserve(input.size());
  for (const Symbol& s : input) c.inputTape.cells.push_back(input_id(s));
  return c;
}

Configuration Machine::initial_configuration_chars(std::string_view input) const {
  Configuration c;
  c.state = startState_;
  c.inputTape.origin = 1;
  c.inputTape.cells.reserve(input.size());
  std::vector<int32_t> charMap(256, -1);
  for (uint16_t i = 0; i < inputSymbols_.size(); ++i) {
    if (inputSymbols_[i].size() == 1) {
      charMap[static_cast<unsigned char>(inputSymbols_[i][0])] = i;
    }
  }
  for (char ch : input) {
    int32_t id = charMap[static_cast<unsigned char>(ch)];
    if (id < 0) {
      throw InvalidInputSymbol("symbol '" + std::string(1, ch) +
                               "' is not in the input alphabet of '" + desc_.name + "'");
    }
    c.inputTape.cells.push_back(static_cast<uint16_t>(id));
  }
  return c;
}

int32_t Machine::lookup(uint32_t state, uint16_t in, uint16_t work, uint16_t out) const {
  uint64_t key = ((static_cast<uint64_t>(state) * nIn_ + in) * nWork_ + work) * nOut_ + out;
  if (useDense_) return dense_[key];
  auto it = sparse_.find(key);
  return it == sparse_.end() ? -1 : it->second;
}

StepOutcome Machine::step(Configuration& c) const {
  if (haltStateMask_[c.state]) return StepOutcome::Halted;

  uint16_t in = c.inputTape.at(c.inputHead);
  uint16_t work = c.workTape.at(c.workHead);
  uint16_t out = c.outputTape.at(c.outputHead);
  int32_t idx = lookup(c.state, in, work, out);
  if (idx < 0) return StepOutcome::StuckMissingRule;
  const Action& a = actions_[static_cast<size_t>(idx)];

  if ((c.inputHead == 1 && a.moveInput < 0) || (c.outputHead == 1 && a.moveOutput < 0)) {
    return StepOutcome::StuckBoundaryViolation;
  }

  if (a.writeWork != work) {
    if (work != 0) {
      c.tapeHashLo ^= zkey(kSaltLo, kTapeWork, c.workHead, work);
      c.tapeHashHi ^= zkey(kSaltHi, kTapeWork, c.workHead, work);
    }
    if (a.writeWork != 0) {
      c.tapeHashLo ^= zkey(kSaltLo, kTapeWork, c.workHead, a.writeWork);
      c.tapeHashHi ^= zkey(kSaltHi, kTapeWork, c.workHead, a.writeWork);
    }
    c.workTape.set(c.workHead, a.writeWork);
  }
  if (a.writeOutput != out) {
    if (out != 0) {
      c.tapeHashLo ^= zkey(kSaltLo, kTapeOutput, c.outputHead, out);
      c.tapeHashHi ^= zkey(kSaltHi, kTapeOutput, c.outputHead, out);
    }
    if (a.writeOutput != 0) {
      c.tapeHashLo ^= zkey(kSaltLo, kTapeOutput, c.outputHead, a.writeOutput);
      c.tapeHashHi ^= zkey(kSaltHi, kTapeOutput, c.outputHead, a.writeOutput);
    }
    c.outputTape.set(c.outputHead, a.writeOutput);
  }

  c.inputHead += a.moveInput;
  c.workHead += a.moveWork;
  c.outputHead += a.moveOutput;
  c.state = a.next;
  ++c.stepCount;
  return StepOutcome::Stepped;
}

Word Machine::output_word(const Configuration& c) const {
  Word w;
  auto last = c.outputTape.last_nonblank();
  if (!last) return w;
  w.reserve(static_cast<size_t>(*last));
  for (long p = 1; p <= *last; ++p) w.push_back(outputSymbols_[c.outputTape.at(p)]);
  return w;
}

bool Machine::same_configuration(const Configuration& a, const Configuration& b) const {
  return a.state == b.state && a.inputHead == b.inputHead && a.workHead == b.workHead &&
         a.outputHead == b.outputHead && a.workTape.same_content(b.workTape) &&
         a.outputTape.same_content(b.outputTape) &&
         a.inputTape.same_content(b.inputTape);
}

void Machine::rehash(Configuration& c) const {
  c.tapeHashLo = 0;
  c.tapeHashHi = 0;
  auto fold = [&](const TapeArray& tape, int tapeId) {
    for (size_t i = 0; i < tape.cells.size(); ++i) {
      uint16_t sym = tape.cells[i];
      if (sym == 0) continue;
      long pos = tape.origin + static_cast<long>(i);
      c.tapeHashLo ^= zkey(kSaltLo, tapeId, pos, sym);
      c.tapeHashHi ^= zkey(kSaltHi, tapeId, pos, sym);
    }
  };
  fold(c.workTape, kTapeWork);
  fold(c.outputTape, kTapeOutput);
}

std::pair<uint64_t, uint64_t> Machine::fingerprint(const Configuration& c) const {
  uint64_t lo = c.tapeHashLo;
  uint64_t hi = c.tapeHashHi;
  lo = splitmix64(lo ^ (static_cast<uint64_t>(c.state) * 0x8cb92ba72f3d8dd7ULL));
  hi = splitmix64(hi ^ (static_cast<uint64_t>(c.state) + 0x71d67fffeda60000ULL));
  lo = splitmix64(lo ^ static_cast<uint64_t>(c.inputHead));
  hi = splitmix64(hi ^ (static_cast<uint64_t>(c.inputHead) * 0xff51afd7ed558ccdULL));
  lo = splitmix64(lo ^ static_cast<uint64_t>(c.workHead) * 0xc4ceb9fe1a85ec53ULL);
  hi = splitmix64(hi ^ static_cast<uint64_t>(c.workHead));
  lo = splitmix64(lo ^ static_cast<uint64_t>(c.outputHead) * 0x2545f4914f6cdd1dULL);
  hi = splitmix64(hi ^ static_cast<uint64_t>(c.outputHead) * 0x369dea0f31a53f85ULL);
  return {lo, hi};
}

}  // namespace zenosim::core
