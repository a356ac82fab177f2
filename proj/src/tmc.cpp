#include "zenosim/tmc.hpp"

#include <boost/functional/hash.hpp>
#include <map>
#include <sstream>

namespace zenosim::tmc {

using core::kBlank;
using core::Symbol;
using core::Word;

std::string_view cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::optional<CmpOp> cmp_op_from_text(std::string_view text) {
  if (text == "==") return CmpOp::Eq;
  if (text == "!=") return CmpOp::Ne;
  if (text == "<") return CmpOp::Lt;
  if (text == "<=") return CmpOp::Le;
  if (text == ">") return CmpOp::Gt;
  if (text == ">=") return CmpOp::Ge;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// ProgramBuilder

uint32_t ProgramBuilder::reg(const std::string& name) {
  for (uint32_t i = 0; i < p_.registers.size(); ++i) {
    if (p_.registers[i] == name) return i;
  }
  p_.registers.push_back(name);
  return static_cast<uint32_t>(p_.registers.size() - 1);
}

std::vector<Stmt>& ProgramBuilder::open_block() {
  if (frames_.empty()) return p_.body;
  Frame& f = frames_.back();
  return f.inElse ? f.stmt->elseBody : f.stmt->body;
}

void ProgramBuilder::set(const std::string& r, uint64_t v) {
  Stmt s;
  s.kind = Stmt::Kind::SetConst;
  s.a = reg(r);
  s.imm = v;
  open_block().push_back(std::move(s));
}
void ProgramBuilder::add(const std::string& r, uint64_t v) {
  Stmt s;
  s.kind = Stmt::Kind::AddConst;
  s.a = reg(r);
  s.imm = v;
  open_block().push_back(std::move(s));
}
void ProgramBuilder::sub(const std::string& r, uint64_t v) {
  Stmt s;
  s.kind = Stmt::Kind::SubConst;
  s.a = reg(r);
  s.imm = v;
  open_block().push_back(std::move(s));
}
void ProgramBuilder::set_reg(const std::string& r, const std::string& src) {
  Stmt s;
  s.kind = Stmt::Kind::SetReg;
  s.a = reg(r);
  s.b = reg(src);
  open_block().push_back(std::move(s));
}
void ProgramBuilder::add_reg(const std::string& r, const std::string& src) {
  Stmt s;
  s.kind = Stmt::Kind::AddReg;
  s.a = reg(r);
  s.b = reg(src);
  open_block().push_back(std::move(s));
}
void ProgramBuilder::sub_reg(const std::string& r, const std::string& src) {
  Stmt s;
  s.kind = Stmt::Kind::SubReg;
  s.a = reg(r);
  s.b = reg(src);
  open_block().push_back(std::move(s));
}
void ProgramBuilder::write1(Symbol sym) {
  Stmt s;
  s.kind = Stmt::Kind::WriteCellOne;
  s.sym = std::move(sym);
  open_block().push_back(std::move(s));
}
void ProgramBuilder::advance_out() {
  Stmt s;
  s.kind = Stmt::Kind::AdvanceOutputHead;
  open_block().push_back(std::move(s));
}
void ProgramBuilder::park2() {
  Stmt s;
  s.kind = Stmt::Kind::ParkOutputHeadAtTwo;
  open_block().push_back(std::move(s));
}
void ProgramBuilder::read(const std::string& r) {
  Stmt s;
  s.kind = Stmt::Kind::ReadInput;
  s.a = reg(r);
  open_block().push_back(std::move(s));
}
void ProgramBuilder::is_prime(const std::string& dst, const std::string& src) {
  Stmt s;
  s.kind = Stmt::Kind::IsPrime;
  s.a = reg(dst);
  s.b = reg(src);
  open_block().push_back(std::move(s));
}
void ProgramBuilder::bounded_simulate(const std::string& dst, const std::string& m,
                                      const std::string& n, const std::string& steps) {
  Stmt s;
  s.kind = Stmt::Kind::BoundedSimulate;
  s.a = reg(dst);
  s.b = reg(m);
  s.c = reg(n);
  s.d = reg(steps);
  open_block().push_back(std::move(s));
}

void ProgramBuilder::while_begin(const std::string& lhs, CmpOp op, uint64_t rhs) {
  Stmt s;
  s.kind = Stmt::Kind::While;
  s.cond = {reg(lhs), op, Operand::c(rhs)};
  open_block().push_back(std::move(s));
  frames_.push_back({&open_block().back(), false});
}
void ProgramBuilder::while_begin_reg(const std::string& lhs, CmpOp op, const std::string& rhs) {
  Stmt s;
  s.kind = Stmt::Kind::While;
  s.cond = {reg(lhs), op, Operand::r(reg(rhs))};
  open_block().push_back(std::move(s));
  frames_.push_back({&open_block().back(), false});
}
void ProgramBuilder::if_begin(const std::string& lhs, CmpOp op, uint64_t rhs) {
  Stmt s;
  s.kind = Stmt::Kind::If;
  s.cond = {reg(lhs), op, Operand::c(rhs)};
  open_block().push_back(std::move(s));
  frames_.push_back({&open_block().back(), false});
}
void ProgramBuilder::if_begin_reg(const std::string& lhs, CmpOp op, const std::string& rhs) {
  Stmt s;
  s.kind = Stmt::Kind::If;
  s.cond = {reg(lhs), op, Operand::r(reg(rhs))};
  open_block().push_back(std::move(s));
  frames_.push_back({&open_block().back(), false});
}
void ProgramBuilder::else_begin() { frames_.back().inElse = true; }
void ProgramBuilder::block_end() { frames_.pop_back(); }

ProgramIR ProgramBuilder::take() { return std::move(p_); }

// ---------------------------------------------------------------------------
// Flattened form shared by the macro machine and the reference interpreter.

namespace {

struct Op {
  enum class Kind : uint8_t {
    SetC, AddC, SubC, SetR, AddR, SubR,
    JumpIfNot, Jump,
    Write1, Advance, Park2, Read, Prime, Simulate,
  };
  Kind kind;
  uint32_t a = 0, b = 0, c = 0, d = 0;
  uint64_t imm = 0;
  Symbol sym;
  Cond cond;
  uint32_t target = 0;
};

void flatten(const std::vector<Stmt>& stmts, std::vector<Op>& ops) {
  for (const Stmt& s : stmts) {
    switch (s.kind) {
      case Stmt::Kind::While: {
        uint32_t head = static_cast<uint32_t>(ops.size());
        ops.push_back({Op::Kind::JumpIfNot, 0, 0, 0, 0, 0, {}, s.cond, 0});
        flatten(s.body, ops);
        ops.push_back({Op::Kind::Jump, 0, 0, 0, 0, 0, {}, {}, head});
        ops[head].target = static_cast<uint32_t>(ops.size());
        break;
      }
      case Stmt::Kind::If: {
        uint32_t branch = static_cast<uint32_t>(ops.size());
        ops.push_back({Op::Kind::JumpIfNot, 0, 0, 0, 0, 0, {}, s.cond, 0});
        flatten(s.body, ops);
        if (s.elseBody.empty()) {
          ops[branch].target = static_cast<uint32_t>(ops.size());
        } else {
          uint32_t skip = static_cast<uint32_t>(ops.size());
          ops.push_back({Op::Kind::Jump, 0, 0, 0, 0, 0, {}, {}, 0});
          ops[branch].target = static_cast<uint32_t>(ops.size());
          flatten(s.elseBody, ops);
          ops[skip].target = static_cast<uint32_t>(ops.size());
        }
        break;
      }
      default: {
        Op op;
        switch (s.kind) {
          case Stmt::Kind::SetConst: op.kind = Op::Kind::SetC; break;
          case Stmt::Kind::AddConst: op.kind = Op::Kind::AddC; break;
          case Stmt::Kind::SubConst: op.kind = Op::Kind::SubC; break;
          case Stmt::Kind::SetReg: op.kind = Op::Kind::SetR; break;
          case Stmt::Kind::AddReg: op.kind = Op::Kind::AddR; break;
          case Stmt::Kind::SubReg: op.kind = Op::Kind::SubR; break;
          case Stmt::Kind::WriteCellOne: op.kind = Op::Kind::Write1; break;
          case Stmt::Kind::AdvanceOutputHead: op.kind = Op::Kind::Advance; break;
          case Stmt::Kind::ParkOutputHeadAtTwo: op.kind = Op::Kind::Park2; break;
          case Stmt::Kind::ReadInput: op.kind = Op::Kind::Read; break;
          case Stmt::Kind::IsPrime: op.kind = Op::Kind::Prime; break;
          case Stmt::Kind::BoundedSimulate: op.kind = Op::Kind::Simulate; break;
          default: continue;
        }
        op.a = s.a;
        op.b = s.b;
        op.c = s.c;
        op.d = s.d;
        op.imm = s.imm;
        op.sym = s.sym;
        ops.push_back(std::move(op));
        break;
      }
    }
  }
}

bool eval_cond(const Cond& cond, const std::vector<Value>& regs) {
  const Value& lhs = regs[cond.lhs];
  Value rhs = cond.rhs.isRegister ? regs[cond.rhs.reg] : Value(cond.rhs.value);
  switch (cond.op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
  }
  return false;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

codec::BitString machine_bits_from_value(const Value& m) {
  codec::BitString bits;
  if (m <= 1) return bits;  // sentinel only (or zero): no payload
  int top = static_cast<int>(boost::multiprecision::msb(m));
  for (int i = top - 1; i >= 0; --i) {
    bits.push_back(boost::multiprecision::bit_test(m, static_cast<unsigned>(i)) ? 1 : 0);
  }
  return bits;
}

Word binary_word_of(const Value& n) {
  if (n == 0) return core::word_from_chars("0");
  std::string s;
  Value v = n;
  while (v > 0) {
    s += static_cast<char>('0' + static_cast<int>(v % 2));
    v /= 2;
  }
  std::reverse(s.begin(), s.end());
  return core::word_from_chars(s);
}

}  // namespace

bool is_prime_value(const Value& v) {
  if (v < 2) return false;
  if (v < 4) return true;
  if (v % 2 == 0) return false;
  for (Value d = 3; d * d <= v; d += 2) {
    if (v % d == 0) return false;
  }
  return true;
}

Word probe_input_word(const codec::BitString& machineBits, const Value& n) {
  Word w;
  w.reserve(machineBits.size() + 1 + 8);
  for (uint8_t b : machineBits) w.push_back(b ? "1" : "0");
  w.push_back(";");
  for (const Symbol& s : binary_word_of(n)) w.push_back(s);
  return w;
}

// ---------------------------------------------------------------------------
// MacroMachine

struct MacroMachine::Shared {
  ProgramIR program;
  std::vector<Op> ops;
};

struct MacroMachine::SimCache {
  struct Entry {
    std::unique_ptr<exec::TmRunner> runner;
    bool unreadable = false;
  };
  std::map<std::pair<Value, Value>, Entry> entries;
};

MacroMachine::MacroMachine(ProgramIR program, Word input) : input_(std::move(input)) {
  auto shared = std::make_shared<Shared>();
  shared->program = std::move(program);
  flatten(shared->program.body, shared->ops);
  shared_ = std::move(shared);
  reset();
}

MacroMachine::MacroMachine(const MacroMachine& other)
    : shared_(other.shared_),
      input_(other.input_),
      registers_(other.registers_),
      regHash_(other.regHash_),
      outputCells_(other.outputCells_),
      outputHead_(other.outputHead_),
      inputHead_(other.inputHead_),
      pc_(other.pc_),
      steps_(other.steps_),
      state_(other.state_),
      lastWrite_(other.lastWrite_),
      lastCellOneChange_(other.lastCellOneChange_),
      lastOutputChange_(other.lastOutputChange_) {
  // the simulation cache is derived data; a clone rebuilds it on demand
}

MacroMachine::~MacroMachine() = default;

void MacroMachine::reset() {
  registers_.assign(shared_->program.registers.size(), Value(0));
  regHash_.assign(registers_.size(), splitmix64(0));
  outputCells_.clear();
  outputHead_ = 1;
  inputHead_ = 1;
  pc_ = 0;
  steps_ = 0;
  state_ = exec::RunState::Running;
  lastWrite_.reset();
  lastCellOneChange_ = 0;
  lastOutputChange_ = 0;
  simCache_.reset();
  resolve_jumps();
}

void MacroMachine::resolve_jumps() {
  const auto& ops = shared_->ops;
  while (pc_ < ops.size() && ops[pc_].kind == Op::Kind::Jump) pc_ = ops[pc_].target;
  if (pc_ >= ops.size()) state_ = exec::RunState::Halted;
}

void MacroMachine::write_register(uint32_t idx, Value v) {
  if (v < 0) v = 0;
  regHash_[idx] = splitmix64(boost::hash<Value>{}(v));
  registers_[idx] = std::move(v);
}

void MacroMachine::write_cell(long pos, const Symbol& sym) {
  if (pos < 1) return;
  if (static_cast<size_t>(pos) >= outputCells_.size()) {
    outputCells_.resize(static_cast<size_t>(pos) + 1, kBlank);
  }
  bool changed = outputCells_[static_cast<size_t>(pos)] != sym;
  outputCells_[static_cast<size_t>(pos)] = sym;
  lastWrite_ = exec::OutputWrite{pos, sym, changed};
  if (changed) {
    lastOutputChange_ = steps_ + 1;  // applied by the step in flight
    if (pos == 1) lastCellOneChange_ = steps_ + 1;
  }
}

exec::RunState MacroMachine::advance() {
  if (state_ != exec::RunState::Running) return state_;
  const Op& op = shared_->ops[pc_];
  lastWrite_.reset();
  uint32_t next = pc_ + 1;

  switch (op.kind) {
    case Op::Kind::SetC: write_register(op.a, Value(op.imm)); break;
    case Op::Kind::AddC: write_register(op.a, registers_[op.a] + op.imm); break;
    case Op::Kind::SubC: {
      Value v = registers_[op.a] - op.imm;
      write_register(op.a, v < 0 ? Value(0) : v);
      break;
    }
    case Op::Kind::SetR: write_register(op.a, registers_[op.b]); break;
    case Op::Kind::AddR: write_register(op.a, registers_[op.a] + registers_[op.b]); break;
    case Op::Kind::SubR: {
      Value v = registers_[op.a] - registers_[op.b];
      write_register(op.a, v < 0 ? Value(0) : v);
      break;
    }
    case Op::Kind::JumpIfNot:
      if (!eval_cond(op.cond, registers_)) next = op.target;
      break;
    case Op::Kind::Jump:
      next = op.target;  // unreachable: jumps are resolved eagerly
      break;
    case Op::Kind::Write1: write_cell(1, op.sym); break;
    case Op::Kind::Advance: outputHead_ += 1; break;
    case Op::Kind::Park2: outputHead_ = 2; break;
    case Op::Kind::Read: {
      const auto& syms = shared_->program.inputSymbols;
      if (inputHead_ >= 1 && static_cast<size_t>(inputHead_) <= input_.size()) {
        const Symbol& s = input_[static_cast<size_t>(inputHead_ - 1)];
        uint64_t idx = syms.size();
        for (uint32_t i = 0; i < syms.size(); ++i) {
          if (syms[i] == s) {
            idx = i;
            break;
          }
        }
        write_register(op.a, Value(idx));
        inputHead_ += 1;
      } else {
        // blank: report the sentinel, keep the head in place
        write_register(op.a, Value(syms.size()));
      }
      break;
    }
    case Op::Kind::Prime:
      write_register(op.a, is_prime_value(registers_[op.b]) ? 1 : 0);
      break;
    case Op::Kind::Simulate: {
      if (!simCache_) simCache_ = std::make_unique<SimCache>();
      auto key = std::make_pair(registers_[op.b], registers_[op.c]);
      auto& entry = simCache_->entries[key];
      if (!entry.runner && !entry.unreadable) {
        auto machine = std::make_shared<const core::Machine>(
            codec::decode(machine_bits_from_value(key.first)));
        try {
          entry.runner =
              std::make_unique<exec::TmRunner>(machine, binary_word_of(key.second));
        } catch (const core::InvalidInputSymbol&) {
          entry.unreadable = true;
        }
      }
      uint64_t budget = registers_[op.d] > 1000000000ULL
                            ? 1000000000ULL
                            : static_cast<uint64_t>(registers_[op.d]);
      bool halted = false;
      if (entry.runner) {
        while (entry.runner->run_state() == exec::RunState::Running &&
               entry.runner->steps() < budget) {
          entry.runner->advance();
        }
        halted = entry.runner->run_state() == exec::RunState::Halted &&
                 entry.runner->steps() <= budget;
      }
      write_register(op.a, halted ? 1 : 0);
      break;
    }
  }

  ++steps_;
  pc_ = next;
  resolve_jumps();
  return state_;
}

std::pair<uint64_t, uint64_t> MacroMachine::fingerprint() const {
  uint64_t lo = splitmix64(pc_ * 0x9e3779b97f4a7c15ULL);
  uint64_t hi = splitmix64(pc_ + 0x71d67fffeda60000ULL);
  lo = splitmix64(lo ^ static_cast<uint64_t>(inputHead_));
  hi = splitmix64(hi ^ static_cast<uint64_t>(inputHead_) * 0xff51afd7ed558ccdULL);
  lo = splitmix64(lo ^ static_cast<uint64_t>(outputHead_) * 0xc4ceb9fe1a85ec53ULL);
  hi = splitmix64(hi ^ static_cast<uint64_t>(outputHead_));
  for (uint64_t h : regHash_) {
    lo = splitmix64(lo ^ h);
    hi = splitmix64(hi ^ (h * 0x2545f4914f6cdd1dULL));
  }
  size_t top = outputCells_.size();
  while (top > 0 && outputCells_[top - 1] == kBlank) --top;
  for (size_t i = 1; i < top; ++i) {
    uint64_t h = std::hash<std::string>{}(outputCells_[i]) ^ (i * 0xa24baed4963ee407ULL);
    lo = splitmix64(lo ^ h);
    hi = splitmix64(hi ^ (h + 0x9fb21c651e98df25ULL));
  }
  return {lo, hi};
}

bool MacroMachine::same_configuration(const exec::SteppableMachine& other) const {
  const auto* rhs = dynamic_cast<const MacroMachine*>(&other);
  if (!rhs || rhs->shared_.get() != shared_.get()) return false;
  if (pc_ != rhs->pc_ || inputHead_ != rhs->inputHead_ || outputHead_ != rhs->outputHead_) {
    return false;
  }
  if (registers_ != rhs->registers_) return false;
  size_t a = outputCells_.size(), b = rhs->outputCells_.size();
  while (a > 0 && outputCells_[a - 1] == kBlank) --a;
  while (b > 0 && rhs->outputCells_[b - 1] == kBlank) --b;
  if (a != b) return false;
  for (size_t i = 0; i < a; ++i) {
    if (outputCells_[i] != rhs->outputCells_[i]) return false;
  }
  return true;
}

std::unique_ptr<exec::SteppableMachine> MacroMachine::clone() const {
  return std::unique_ptr<exec::SteppableMachine>(new MacroMachine(*this));
}

Symbol MacroMachine::first_output_cell() const {
  return outputCells_.size() > 1 ? outputCells_[1] : kBlank;
}

Word MacroMachine::output_word() const {
  size_t top = outputCells_.size();
  while (top > 1 && outputCells_[top - 1] == kBlank) --top;
  Word w;
  for (size_t i = 1; i < top; ++i) w.push_back(outputCells_[i]);
  return w;
}

std::string MacroMachine::label() const { return shared_->program.name; }

const std::vector<std::string>& MacroMachine::register_names() const {
  return shared_->program.registers;
}

std::optional<uint32_t> MacroMachine::register_index(const std::string& name) const {
  const auto& regs = shared_->program.registers;
  for (uint32_t i = 0; i < regs.size(); ++i) {
    if (regs[i] == name) return i;
  }
  return std::nullopt;
}

exec::TraceRecord MacroMachine::sample(int radius) const {
  exec::TraceRecord rec;
  rec.step = steps_;
  rec.state = "pc=" + std::to_string(pc_);
  rec.inputHead = inputHead_;
  rec.workHead = 0;
  rec.outputHead = outputHead_;
  rec.cellOne = first_output_cell();
  {
    std::string s;
    for (long p = inputHead_ - radius; p <= inputHead_ + radius; ++p) {
      if (!s.empty()) s += ' ';
      if (p < 1) {
        s += '|';
        continue;
      }
      if (p == inputHead_) s += '[';
      s += (static_cast<size_t>(p) <= input_.size()) ? input_[static_cast<size_t>(p - 1)]
                                                     : kBlank;
      if (p == inputHead_) s += ']';
    }
    rec.inputWindow = s;
  }
  {
    std::string s;
    size_t shown = 0;
    for (size_t i = 0; i < registers_.size() && shown < static_cast<size_t>(2 * radius + 1);
         ++i, ++shown) {
      if (!s.empty()) s += ' ';
      s += shared_->program.registers[i] + "=" + registers_[i].str();
    }
    rec.workWindow = s;
  }
  {
    std::string s;
    for (long p = outputHead_ - radius; p <= outputHead_ + radius; ++p) {
      if (!s.empty()) s += ' ';
      if (p < 1) {
        s += '|';
        continue;
      }
      if (p == outputHead_) s += '[';
      s += (static_cast<size_t>(p) < outputCells_.size()) ? outputCells_[static_cast<size_t>(p)]
                                                          : kBlank;
      if (p == outputHead_) s += ']';
    }
    rec.outputWindow = s;
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Reference interpreter: same semantics, full trace.

ReferenceResult reference_interpret(const ProgramIR& p, const Word& input,
                                    const ReferenceOptions& opts) {
  ReferenceResult result;
  MacroMachine m(p, input);
  Symbol cellOne = m.first_output_cell();
  result.cellOneChanges.emplace_back(0, cellOne);
  while (m.run_state() == exec::RunState::Running && m.steps() < opts.stepCap) {
    ReferenceStep step;
    step.step = m.steps();
    step.pc = m.pc();
    step.cellOne = m.first_output_cell();
    step.outputHead = m.output_head_position();
    if (opts.recordRegisters) {
      for (uint32_t i = 0; i < p.registers.size(); ++i) {
        step.registers.push_back(m.register_value(i));
        if (m.register_value(i) > result.maxRegisterValue) {
          result.maxRegisterValue = m.register_value(i);
        }
      }
    }
    result.trace.push_back(std::move(step));
    m.advance();
    if (!opts.recordRegisters) {
      for (uint32_t i = 0; i < p.registers.size(); ++i) {
        if (m.register_value(i) > result.maxRegisterValue) {
          result.maxRegisterValue = m.register_value(i);
        }
      }
    }
    Symbol now = m.first_output_cell();
    if (now != cellOne) {
      cellOne = now;
      result.cellOneChanges.emplace_back(m.steps(), cellOne);
    }
  }
  result.steps = m.steps();
  result.halted = m.run_state() == exec::RunState::Halted;
  result.stepCapExceeded = !result.halted && m.steps() >= opts.stepCap;
  result.finalOutput = m.output_word();
  return result;
}

// ---------------------------------------------------------------------------
// Corpus programs

ProgramIR corpus_halting_probe(bool paperFaithful) {
  ProgramBuilder b(paperFaithful ? "halting-probe" : "probe-halt");
  b.input_symbols({"0", "1", ";"});
  b.write1("0");
  // machine bits arrive first, with a leading sentinel 1 in the register
  b.set("m", 1);
  b.read("b");
  b.while_begin("b", CmpOp::Le, 1);
  {
    b.if_begin("b", CmpOp::Eq, 0);
    b.add_reg("m", "m");
    b.else_begin();
    b.add_reg("m", "m");
    b.add("m", 1);
    b.block_end();
    b.read("b");
  }
  b.block_end();
  b.set("n", 0);
  b.read("b");
  b.while_begin("b", CmpOp::Le, 1);
  {
    b.if_begin("b", CmpOp::Eq, 0);
    b.add_reg("n", "n");
    b.else_begin();
    b.add_reg("n", "n");
    b.add("n", 1);
    b.block_end();
    b.read("b");
  }
  b.block_end();
  b.set("i", 1);
  if (paperFaithful) {
    b.while_begin("i", CmpOp::Gt, 0);
    {
      b.bounded_simulate("h", "m", "n", "i");
      b.if_begin("h", CmpOp::Eq, 1);
      b.write1("1");
      b.block_end();
      b.add("i", 1);
    }
    b.block_end();
  } else {
    b.set("h", 0);
    b.while_begin("h", CmpOp::Eq, 0);
    {
      b.bounded_simulate("h", "m", "n", "i");
      b.add("i", 1);
    }
    b.block_end();
    b.write1("1");
    b.park2();
  }
  return b.take();
}

ProgramIR corpus_twin_prime() {
  ProgramBuilder b("twin-prime");
  b.set("i", 1);
  b.set("n", 1);
  b.while_begin("i", CmpOp::Gt, 0);
  {
    b.write1("0");
    b.set("found", 0);
    b.set("h1", 0);
    b.set("h2", 0);
    b.set("j", 0);
    b.while_begin("j", CmpOp::Le, 100);
    {
      b.is_prime("cur", "n");
      b.if_begin("h2", CmpOp::Eq, 1);
      {
        b.if_begin("cur", CmpOp::Eq, 1);
        b.set("found", 1);
        b.block_end();
      }
      b.block_end();
      b.if_begin("h1", CmpOp::Eq, 1);
      b.set("h2", 1);
      b.else_begin();
      b.set("h2", 0);
      b.block_end();
      b.if_begin("cur", CmpOp::Eq, 1);
      b.set("h1", 1);
      b.else_begin();
      b.set("h1", 0);
      b.block_end();
      b.add("n", 1);
      b.add("j", 1);
    }
    b.block_end();
    b.if_begin("found", CmpOp::Eq, 1);
    b.write1("1");
    b.block_end();
    b.sub("n", 1);
    b.add("i", 100);
  }
  b.block_end();
  return b.take();
}

ProgramIR corpus_digit_search(const std::string& pattern) {
  if (pattern.empty()) throw std::invalid_argument("digit-search pattern must be non-empty");
  for (char c : pattern) {
    if (c < '0' || c > '9') {
      throw std::invalid_argument("digit-search pattern must be decimal digits");
    }
  }
  uint64_t L = pattern.size();

  // Prefix-automaton transitions computed host-side: state k = number of
  // matched pattern characters, input a digit.
  auto delta = [&](uint64_t k, char digit) -> uint64_t {
    std::string s = pattern.substr(0, k) + digit;
    for (uint64_t len = std::min<uint64_t>(k + 1, L);; --len) {
      if (s.substr(s.size() - len) == pattern.substr(0, len)) return len;
      if (len == 0) return 0;
    }
  };

  ProgramBuilder b("digit-search-" + pattern);
  std::vector<Symbol> digits;
  for (char c = '0'; c <= '9'; ++c) digits.push_back(Symbol(1, c));
  b.input_symbols(digits);

  b.write1("0");
  b.set("matched", 0);
  b.while_begin("matched", CmpOp::Lt, L);
  {
    b.read("d");
    b.if_begin("d", CmpOp::Eq, 10);  // blank: stream exhausted
    {
      b.while_begin("d", CmpOp::Ge, 0);  // spin in place with 0 at cell 1
      b.block_end();
    }
    b.block_end();
    // Dispatch on the pre-read match length so one digit drives exactly one
    // automaton transition.
    b.set_reg("mprev", "matched");
    for (uint64_t k = 0; k < L; ++k) {
      b.if_begin("mprev", CmpOp::Eq, k);
      {
        for (int digit = 0; digit <= 9; ++digit) {
          b.if_begin("d", CmpOp::Eq, static_cast<uint64_t>(digit));
          b.set("matched", delta(k, static_cast<char>('0' + digit)));
          b.block_end();
        }
      }
      b.block_end();
    }
  }
  b.block_end();
  b.write1("1");
  b.park2();
  return b.take();
}

// ---------------------------------------------------------------------------
// Machin-style digits of pi.

std::string pi_digits(int count) {
  if (count < 1) return "";
  const int guard = 12;
  Value scale = 1;
  for (int i = 0; i < count + guard - 1; ++i) scale *= 10;

  auto atan_inv = [&](uint64_t x) {
    Value xx = Value(x) * x;
    Value power = scale / x;
    Value total = 0;
    bool add = true;
    for (uint64_t k = 0; power != 0; ++k) {
      Value term = power / (2 * k + 1);
      total += add ? term : -term;
      power /= xx;
      add = !add;
    }
    return total;
  };

  Value pi = 16 * atan_inv(5) - 4 * atan_inv(239);
  std::string s = pi.str();
  return s.substr(0, static_cast<size_t>(count));
}

// ---------------------------------------------------------------------------
// IR text form

namespace {

void print_block(std::ostringstream& out, const ProgramIR& p, const std::vector<Stmt>& body,
                 int depth) {
  std::string pad(static_cast<size_t>(depth) * 2, ' ');
  auto rname = [&](uint32_t i) { return p.registers[i]; };
  auto rhs_text = [&](const Operand& o) {
    return o.isRegister ? rname(o.reg) : std::to_string(o.value);
  };
  for (const Stmt& s : body) {
    switch (s.kind) {
      case Stmt::Kind::SetConst: out << pad << "set " << rname(s.a) << ' ' << s.imm << "\n"; break;
      case Stmt::Kind::AddConst: out << pad << "add " << rname(s.a) << ' ' << s.imm << "\n"; break;
      case Stmt::Kind::SubConst: out << pad << "sub " << rname(s.a) << ' ' << s.imm << "\n"; break;
      case Stmt::Kind::SetReg:
        out << pad << "set " << rname(s.a) << ' ' << rname(s.b) << "\n";
        break;
      case Stmt::Kind::AddReg:
        out << pad << "add " << rname(s.a) << ' ' << rname(s.b) << "\n";
        break;
      case Stmt::Kind::SubReg:
        out << pad << "sub " << rname(s.a) << ' ' << rname(s.b) << "\n";
        break;
      case Stmt::Kind::While:
        out << pad << "while " << rname(s.cond.lhs) << ' ' << cmp_op_text(s.cond.op) << ' '
            << rhs_text(s.cond.rhs) << "\n";
        print_block(out, p, s.body, depth + 1);
        out << pad << "end\n";
        break;
      case Stmt::Kind::If:
        out << pad << "if " << rname(s.cond.lhs) << ' ' << cmp_op_text(s.cond.op) << ' '
            << rhs_text(s.cond.rhs) << "\n";
        print_block(out, p, s.body, depth + 1);
        if (!s.elseBody.empty()) {
          out << pad << "else\n";
          print_block(out, p, s.elseBody, depth + 1);
        }
        out << pad << "end\n";
        break;
      case Stmt::Kind::WriteCellOne: out << pad << "write1 " << s.sym << "\n"; break;
      case Stmt::Kind::AdvanceOutputHead: out << pad << "advance-out\n"; break;
      case Stmt::Kind::ParkOutputHeadAtTwo: out << pad << "park2\n"; break;
      case Stmt::Kind::ReadInput: out << pad << "read " << rname(s.a) << "\n"; break;
      case Stmt::Kind::IsPrime:
        out << pad << "prime " << rname(s.a) << ' ' << rname(s.b) << "\n";
        break;
      case Stmt::Kind::BoundedSimulate:
        out << pad << "simulate " << rname(s.a) << ' ' << rname(s.b) << ' ' << rname(s.c) << ' '
            << rname(s.d) << "\n";
        break;
    }
  }
}

}  // namespace

std::string ir_print(const ProgramIR& p) {
  std::ostringstream out;
  out << "program " << p.name << "\n";
  out << "registers";
  for (const auto& r : p.registers) out << ' ' << r;
  out << "\n";
  if (!p.inputSymbols.empty()) {
    out << "input-symbols";
    for (const auto& s : p.inputSymbols) out << ' ' << s;
    out << "\n";
  }
  print_block(out, p, p.body, 1);
  return out.str();
}

ProgramIR ir_parse(const std::string& text) {
  ProgramIR p;
  std::map<std::string, uint32_t> regs;
  auto regOf = [&](const std::string& name) -> uint32_t {
    auto it = regs.find(name);
    if (it == regs.end()) throw std::runtime_error("undeclared register '" + name + "'");
    return it->second;
  };
  auto operandOf = [&](const std::string& tok) -> Operand {
    if (!tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) != 0)) {
      return Operand::c(std::stoull(tok));
    }
    return Operand::r(regOf(tok));
  };

  std::vector<std::vector<Stmt>*> blocks;
  blocks.push_back(&p.body);
  std::vector<Stmt*> owners;  // parallel: the if/while that owns each open block
  owners.push_back(nullptr);

  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  bool sawHeader = false;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto need = [&](size_t n) {
      if (tok.size() != n) {
        throw std::runtime_error("line " + std::to_string(lineNo) + ": expected " +
                                 std::to_string(n) + " tokens");
      }
    };

    if (!sawHeader) {
      need(2);
      if (tok[0] != "program") throw std::runtime_error("missing 'program' header");
      p.name = tok[1];
      sawHeader = true;
      continue;
    }
    const std::string& kw = tok[0];
    if (kw == "registers") {
      for (size_t i = 1; i < tok.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(tok[i][0])) != 0) {
          throw std::runtime_error("register names must not start with a digit");
        }
        regs.emplace(tok[i], static_cast<uint32_t>(p.registers.size()));
        if (regs.at(tok[i]) == p.registers.size()) p.registers.push_back(tok[i]);
      }
      continue;
    }
    if (kw == "input-symbols") {
      for (size_t i = 1; i < tok.size(); ++i) p.inputSymbols.push_back(tok[i]);
      continue;
    }

    Stmt s;
    if (kw == "set" || kw == "add" || kw == "sub") {
      need(3);
      bool constant = std::isdigit(static_cast<unsigned char>(tok[2][0])) != 0;
      if (kw == "set") s.kind = constant ? Stmt::Kind::SetConst : Stmt::Kind::SetReg;
      if (kw == "add") s.kind = constant ? Stmt::Kind::AddConst : Stmt::Kind::AddReg;
      if (kw == "sub") s.kind = constant ? Stmt::Kind::SubConst : Stmt::Kind::SubReg;
      s.a = regOf(tok[1]);
      if (constant) {
        s.imm = std::stoull(tok[2]);
      } else {
        s.b = regOf(tok[2]);
      }
    } else if (kw == "while" || kw == "if") {
      need(4);
      s.kind = kw == "while" ? Stmt::Kind::While : Stmt::Kind::If;
      auto op = cmp_op_from_text(tok[2]);
      if (!op) throw std::runtime_error("bad comparison '" + tok[2] + "'");
      s.cond = {regOf(tok[1]), *op, operandOf(tok[3])};
      blocks.back()->push_back(std::move(s));
      Stmt* owner = &blocks.back()->back();
      blocks.push_back(&owner->body);
      owners.push_back(owner);
      continue;
    } else if (kw == "else") {
      need(1);
      if (owners.back() == nullptr || owners.back()->kind != Stmt::Kind::If) {
        throw std::runtime_error("line " + std::to_string(lineNo) + ": stray else");
      }
      blocks.back() = &owners.back()->elseBody;
      continue;
    } else if (kw == "end") {
      need(1);
      if (owners.size() <= 1) {
        throw std::runtime_error("line " + std::to_string(lineNo) + ": stray end");
      }
      blocks.pop_back();
      owners.pop_back();
      continue;
    } else if (kw == "write1") {
      need(2);
      s.kind = Stmt::Kind::WriteCellOne;
      s.sym = tok[1];
    } else if (kw == "advance-out") {
      need(1);
      s.kind = Stmt::Kind::AdvanceOutputHead;
    } else if (kw == "park2") {
      need(1);
      s.kind = Stmt::Kind::ParkOutputHeadAtTwo;
    } else if (kw == "read") {
      need(2);
      s.kind = Stmt::Kind::ReadInput;
      s.a = regOf(tok[1]);
    } else if (kw == "prime") {
      need(3);
      s.kind = Stmt::Kind::IsPrime;
      s.a = regOf(tok[1]);
      s.b = regOf(tok[2]);
    } else if (kw == "simulate") {
      need(5);
      s.kind = Stmt::Kind::BoundedSimulate;
      s.a = regOf(tok[1]);
      s.b = regOf(tok[2]);
      s.c = regOf(tok[3]);
      s.d = regOf(tok[4]);
    } else {
      throw std::runtime_error("line " + std::to_string(lineNo) + ": unknown op '" + kw + "'");
    }
    blocks.back()->push_back(std::move(s));
  }
  if (owners.size() != 1) throw std::runtime_error("unclosed block");
  return p;
}

}  // namespace zenosim::tmc
