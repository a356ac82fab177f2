#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zenosim/codec.hpp"
#include "zenosim/core.hpp"
#include "zenosim/exec.hpp"

namespace zenosim::tmc {

using Value = boost::multiprecision::cpp_int;

enum class CmpOp : uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view cmp_op_text(CmpOp op);
std::optional<CmpOp> cmp_op_from_text(std::string_view text);

// Register index or literal constant.
struct Operand {
  bool isRegister = false;
  uint32_t reg = 0;
  uint64_t value = 0;

  static Operand r(uint32_t idx) { return {true, idx, 0}; }
  static Operand c(uint64_t v) { return {false, 0, v}; }
};

struct Cond {
  uint32_t lhs = 0;  // register
  CmpOp op = CmpOp::Eq;
  Operand rhs;
};

// Structured imperative statements over non-negative integer registers plus
// the machine-facing effects (output cell 1, output head, input reads).
// Subtraction saturates at zero.
struct Stmt {
  enum class Kind : uint8_t {
    SetConst,
    AddConst,
    SubConst,
    SetReg,
    AddReg,
    SubReg,
    While,
    If,
    WriteCellOne,
    AdvanceOutputHead,
    ParkOutputHeadAtTwo,
    ReadInput,   // reg <- symbol index (alphabet size for blank); head
                 // advances past non-blank symbols only
    IsPrime,     // dst <- 1 iff src is prime
    BoundedSimulate,  // dst <- 1 iff machine bits(m) halts on binary(n) within steps
  };
  Kind kind;
  uint32_t a = 0;  // primary register
  uint32_t b = 0;  // source register (SetReg/AddReg/SubReg, IsPrime src, Simulate m)
  uint32_t c = 0;  // Simulate n
  uint32_t d = 0;  // Simulate steps
  uint64_t imm = 0;
  core::Symbol sym;  // WriteCellOne
  Cond cond;         // While/If
  std::vector<Stmt> body;      // While body / If-then
  std::vector<Stmt> elseBody;  // If-else
};

struct ProgramIR {
  std::string name;
  std::vector<std::string> registers;
  std::vector<core::Symbol> inputSymbols;  // index order used by ReadInput
  std::vector<Stmt> body;
};

// Convenience construction with register-name resolution.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(std::string name) { p_.name = std::move(name); }

  ProgramBuilder& input_symbols(std::vector<core::Symbol> syms) {
    p_.inputSymbols = std::move(syms);
    return *this;
  }
  uint32_t reg(const std::string& name);

  // Statement helpers append to the innermost open block.
  void set(const std::string& r, uint64_t v);
  void add(const std::string& r, uint64_t v);
  void sub(const std::string& r, uint64_t v);
  void set_reg(const std::string& r, const std::string& src);
  void add_reg(const std::string& r, const std::string& src);
  void sub_reg(const std::string& r, const std::string& src);
  void write1(core::Symbol sym);
  void advance_out();
  void park2();
  void read(const std::string& r);
  void is_prime(const std::string& dst, const std::string& src);
  void bounded_simulate(const std::string& dst, const std::string& m, const std::string& n,
                        const std::string& steps);
  void while_begin(const std::string& lhs, CmpOp op, uint64_t rhs);
  void while_begin_reg(const std::string& lhs, CmpOp op, const std::string& rhs);
  void if_begin(const std::string& lhs, CmpOp op, uint64_t rhs);
  void if_begin_reg(const std::string& lhs, CmpOp op, const std::string& rhs);
  void else_begin();
  void block_end();

  ProgramIR take();

 private:
  std::vector<Stmt>& open_block();

  ProgramIR p_;
  // stack of (statement path) for nested blocks
  struct Frame {
    Stmt* stmt;
    bool inElse;
  };
  std::vector<Frame> frames_;
};

// One statement per step; primitive calls count as one step. Condition
// evaluations of while/if are steps; plain control transfers are free.
class MacroMachine : public exec::SteppableMachine {
 public:
  MacroMachine(ProgramIR program, core::Word input);
  MacroMachine(const MacroMachine& other);
  ~MacroMachine() override;

  void reset() override;
  exec::RunState advance() override;
  exec::RunState run_state() const override { return state_; }
  uint64_t steps() const override { return steps_; }

  std::pair<uint64_t, uint64_t> fingerprint() const override;
  bool same_configuration(const exec::SteppableMachine& other) const override;
  std::unique_ptr<exec::SteppableMachine> clone() const override;

  core::Symbol first_output_cell() const override;
  long output_head_position() const override { return outputHead_; }
  core::Word output_word() const override;
  std::optional<exec::OutputWrite> last_output_write() const override { return lastWrite_; }
  uint64_t last_cell_one_change_step() const override { return lastCellOneChange_; }
  uint64_t last_output_change_step() const override { return lastOutputChange_; }

  std::string label() const override;
  exec::TraceRecord sample(int radius) const override;

  const Value& register_value(uint32_t idx) const { return registers_[idx]; }
  const std::vector<std::string>& register_names() const;
  std::optional<uint32_t> register_index(const std::string& name) const;
  uint32_t pc() const { return pc_; }

 private:
  struct Shared;  // flattened program
  std::shared_ptr<const Shared> shared_;
  core::Word input_;

  std::vector<Value> registers_;
  std::vector<uint64_t> regHash_;
  std::vector<core::Symbol> outputCells_;  // index 0 unused; tape cell i at [i]
  long outputHead_ = 1;
  long inputHead_ = 1;
  uint32_t pc_ = 0;
  uint64_t steps_ = 0;
  exec::RunState state_ = exec::RunState::Running;
  std::optional<exec::OutputWrite> lastWrite_;
  uint64_t lastCellOneChange_ = 0;
  uint64_t lastOutputChange_ = 0;

  // incremental bounded-simulation states, keyed by (m, n); derived data,
  // excluded from fingerprints and equality
  struct SimCache;
  std::unique_ptr<SimCache> simCache_;

  void write_register(uint32_t idx, Value v);
  void resolve_jumps();
  void write_cell(long pos, const core::Symbol& sym);
};

struct ReferenceOptions {
  uint64_t stepCap = 200000;
  bool recordRegisters = false;
};

struct ReferenceStep {
  uint64_t step = 0;
  uint32_t pc = 0;
  core::Symbol cellOne;
  long outputHead = 1;
  std::vector<Value> registers;  // filled when recordRegisters
};

struct ReferenceResult {
  bool halted = false;
  bool stepCapExceeded = false;
  uint64_t steps = 0;
  core::Word finalOutput;
  std::vector<ReferenceStep> trace;
  // (step, new value) for every change of output cell 1
  std::vector<std::pair<uint64_t, core::Symbol>> cellOneChanges;
  Value maxRegisterValue = 0;
};

// Oracle-grade interpretation of the same macro semantics, with a full
// per-step trace.
ReferenceResult reference_interpret(const ProgramIR& p, const core::Word& input,
                                    const ReferenceOptions& opts = {});

struct CompileOptions {
  int registerWidth = 16;  // bits per register field on the work tape
};

struct CompileError : std::runtime_error {
  enum class Kind : uint8_t {
    UncompilablePrimitive,
    ConstantTooWide,
    OutputHeadUntracked,
  };
  Kind kind;
  CompileError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Lowers the program (is_prime becomes trial division over scratch
// registers) and emits a transition table: registers live on the work tape
// as fixed-width binary fields, '|' separated, between '@' and '$'.
// bounded_simulate is not compilable.
core::MachineDescription compile(const ProgramIR& p, const CompileOptions& opts = {});

// The dovetailing halting probe. paperFaithful keeps the eternal loop that
// rewrites 1 forever; otherwise the probe halts once it sees the target halt.
ProgramIR corpus_halting_probe(bool paperFaithful);
// Scans consecutive width-100 windows for twin prime pairs, writing 0 at the
// top of every window and 1 when a pair lies inside it; never terminates.
ProgramIR corpus_twin_prime();
// Reads a digit stream; halts with 1 at cell 1 on the first occurrence of
// the pattern, loops in place with 0 if the stream ends first.
ProgramIR corpus_digit_search(const std::string& pattern);

std::string ir_print(const ProgramIR& p);
ProgramIR ir_parse(const std::string& text);  // throws std::runtime_error

bool is_prime_value(const Value& v);

// count digits of pi as characters, starting "3141...".
std::string pi_digits(int count);

// Input word for the probe: bits of the machine encoding, ';', binary of n.
core::Word probe_input_word(const codec::BitString& machineBits, const Value& n);

}  // namespace zenosim::tmc
