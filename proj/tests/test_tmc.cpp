#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/testutil.hpp"
#include "zenosim/codec.hpp"
#include "zenosim/gallery.hpp"
#include "zenosim/limits.hpp"
#include "zenosim/tmc.hpp"

using namespace zenosim;
using tmc::CmpOp;
using tmc::MacroMachine;
using tmc::ProgramBuilder;
using tmc::ProgramIR;

namespace {

ProgramIR write_one_program() {
  ProgramBuilder b("write-one");
  b.write1("1");
  b.park2();
  return b.take();
}

ProgramIR counter_program(uint64_t upTo) {
  ProgramBuilder b("counter");
  b.set("c", 0);
  b.while_begin("c", CmpOp::Lt, upTo);
  b.add("c", 1);
  b.block_end();
  b.write1("1");
  b.park2();
  return b.take();
}

// Same shape as the twin-prime corpus program, narrower window; test-only.
ProgramIR mini_twin_prime(uint64_t width) {
  ProgramBuilder b("mini-twin-prime");
  b.set("i", 1);
  b.set("n", 1);
  b.while_begin("i", CmpOp::Gt, 0);
  {
    b.write1("0");
    b.set("found", 0);
    b.set("h1", 0);
    b.set("h2", 0);
    b.set("j", 0);
    b.while_begin("j", CmpOp::Le, width);
    {
      b.is_prime("cur", "n");
      b.if_begin("h2", CmpOp::Eq, 1);
      b.if_begin("cur", CmpOp::Eq, 1);
      b.set("found", 1);
      b.block_end();
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
    b.add("i", width);
  }
  b.block_end();
  return b.take();
}

// Expected first-cell change sequence given per-window twin bits.
std::vector<core::Symbol> expected_changes(const std::vector<bool>& bits) {
  std::vector<core::Symbol> seq = {"0"};
  for (bool b : bits) {
    if (b) {
      seq.push_back("1");
      seq.push_back("0");  // next window's opening write
    }
  }
  return seq;
}

std::vector<core::Symbol> observed_changes(const tmc::ReferenceResult& r) {
  std::vector<core::Symbol> seq;
  for (const auto& [step, sym] : r.cellOneChanges) {
    if (step == 0) continue;  // initial blank
    seq.push_back(sym);
  }
  return seq;
}

}  // namespace

TEST_CASE("macro machine runs the straight-line program") {
  auto r = tmc::reference_interpret(write_one_program(), {});
  CHECK(r.halted);
  CHECK(r.steps == 2);
  CHECK(r.trace.size() == 2);
  CHECK(core::word_to_string(r.finalOutput) == "1");

  MacroMachine m(write_one_program(), {});
  auto v = limits::zeno_run(m, {});
  REQUIRE(v.kind == limits::ZenoVerdict::Kind::ClassicallyHalted);
  CHECK(v.computesBit);
  CHECK(v.cellOneValue == "1");
}

TEST_CASE("counter program halts after the expected number of macro steps") {
  auto r = tmc::reference_interpret(counter_program(10), {});
  CHECK(r.halted);
  // set + 11 condition checks + 10 increments + write + park
  CHECK(r.steps == 1 + 11 + 10 + 2);
  CHECK(r.maxRegisterValue == 10);
}

TEST_CASE("is_prime primitive agrees with the sieve up to 2000 and at 7919") {
  auto sieve = testutil::sieve(2000);
  for (uint32_t v = 0; v <= 2000; ++v) {
    CAPTURE(v);
    REQUIRE(tmc::is_prime_value(v) == sieve[v]);
  }
  CHECK(tmc::is_prime_value(7919));
  CHECK_FALSE(tmc::is_prime_value(7917));
}

TEST_CASE("pi digits match the published prefix") {
  CHECK(tmc::pi_digits(50) == "31415926535897932384626433832795028841971693993751");
  // stable across lengths
  CHECK(tmc::pi_digits(10) == "3141592653");
}

TEST_CASE("ir text round-trips the corpus programs") {
  for (auto prog : {tmc::corpus_halting_probe(true), tmc::corpus_halting_probe(false),
                    tmc::corpus_twin_prime(), tmc::corpus_digit_search("777")}) {
    std::string text = tmc::ir_print(prog);
    ProgramIR back = tmc::ir_parse(text);
    CHECK(tmc::ir_print(back) == text);
  }
}

TEST_CASE("twin-prime iteration bits follow the sieve oracle on a prefix") {
  auto isPrime = testutil::sieve(1200);
  std::vector<bool> bits;
  for (uint32_t k = 0; k < 10; ++k) bits.push_back(testutil::twin_window_bit(isPrime, 1 + 100 * k, 100));

  tmc::ReferenceOptions opts;
  opts.stepCap = 17000;  // roughly ten windows
  auto r = tmc::reference_interpret(tmc::corpus_twin_prime(), {}, opts);
  REQUIRE_FALSE(r.halted);

  auto observed = observed_changes(r);
  auto expected = expected_changes(bits);
  // compare the longest common prefix; the run stops mid-window
  size_t n = std::min(observed.size(), expected.size());
  REQUIRE(n >= 8);
  for (size_t i = 0; i < n; ++i) {
    CAPTURE(i);
    CHECK(observed[i] == expected[i]);
  }
}

TEST_CASE("halting probe lights up exactly when the target halts") {
  codec::BitString inc = codec::encode(gallery::increment_machine());

  // target halting time, read off the execution engine
  exec::TmRunner target(std::make_shared<const core::Machine>(gallery::increment_machine()),
                        core::word_from_chars("11"));
  auto tv = exec::run(target, {});
  REQUIRE(tv.kind == exec::RunVerdict::Kind::HaltedWithOutput);
  uint64_t haltTime = tv.steps;

  core::Word input = tmc::probe_input_word(inc, 3);  // binary 11
  MacroMachine probe(tmc::corpus_halting_probe(true), input);
  uint64_t flipStep = 0;
  for (int i = 0; i < 200000 && probe.run_state() == exec::RunState::Running; ++i) {
    probe.advance();
    if (flipStep == 0 && probe.first_output_cell() == "1") {
      flipStep = probe.steps();
      break;
    }
  }
  REQUIRE(flipStep > 0);
  // by then the dovetail counter has reached at least the halting time
  CHECK(probe.register_value(*probe.register_index("i")) >= haltTime);
  CHECK(probe.register_value(*probe.register_index("m")) > 1);  // sentinel plus payload

  // paper-faithful probe never cycles: its verdict stays heuristic
  MacroMachine probe2(tmc::corpus_halting_probe(true), input);
  auto iv = limits::inductive_run(probe2, {.maxSteps = 20000, .maxStoredFingerprints = 20000},
                                  1000);
  REQUIRE(iv.kind == limits::InductiveVerdict::Kind::OutputStableHeuristic);
  CHECK(core::word_to_string(iv.word) == "1");
}

TEST_CASE("probe-halt closes the loop and computes the bit") {
  codec::BitString inc = codec::encode(gallery::increment_machine());
  core::Word input = tmc::probe_input_word(inc, 3);
  MacroMachine probe(tmc::corpus_halting_probe(false), input);
  auto v = limits::zeno_run(probe, {.maxSteps = 200000, .maxStoredFingerprints = 200000});
  REQUIRE(v.kind == limits::ZenoVerdict::Kind::ClassicallyHalted);
  CHECK(v.computesBit);
  CHECK(v.cellOneValue == "1");
}

TEST_CASE("probe on garbage bits keeps a 0 first cell forever") {
  codec::BitString junk = codec::bits_from_string("110010111");
  core::Word input = tmc::probe_input_word(junk, 5);
  MacroMachine probe(tmc::corpus_halting_probe(true), input);
  for (int i = 0; i < 30000; ++i) probe.advance();
  CHECK(probe.run_state() == exec::RunState::Running);
  CHECK(probe.first_output_cell() == "0");
}

TEST_CASE("digit search halts at the first occurrence") {
  // "11" in "0110": ends at stream position 3
  MacroMachine m(tmc::corpus_digit_search("11"), core::word_from_chars("0110"));
  auto v = limits::zeno_run(m, {});
  REQUIRE(v.kind == limits::ZenoVerdict::Kind::ClassicallyHalted);
  CHECK(v.cellOneValue == "1");
  CHECK(v.computesBit);

  auto r = tmc::reference_interpret(tmc::corpus_digit_search("11"),
                                    core::word_from_chars("0110"));
  REQUIRE(r.halted);
  CHECK(core::word_to_string(r.finalOutput) == "1");
}

TEST_CASE("digit search with an absent pattern spins in place with 0") {
  MacroMachine m(tmc::corpus_digit_search("0"), core::word_from_chars("111"));
  auto v = exec::run(m, {.maxSteps = 10000, .maxStoredFingerprints = 10000});
  REQUIRE(v.kind == exec::RunVerdict::Kind::CycleCertified);
  CHECK(m.first_output_cell() == "0");
}

TEST_CASE("digit search respects overlapping prefixes") {
  // "1211" read against pattern "121": the automaton has to reuse the "1"
  MacroMachine m(tmc::corpus_digit_search("121"), core::word_from_chars("11212"));
  auto r = tmc::reference_interpret(tmc::corpus_digit_search("121"),
                                    core::word_from_chars("11212"));
  REQUIRE(r.halted);  // "121" ends at position 4
}

// ---------------------------------------------------------------------------
// compiler

namespace {

std::shared_ptr<const core::Machine> compile_machine(const ProgramIR& p, int width = 16) {
  tmc::CompileOptions opts;
  opts.registerWidth = width;
  auto desc = tmc::compile(p, opts);
  REQUIRE(core::validate(desc).ok());
  return std::make_shared<const core::Machine>(std::move(desc));
}

// first-cell change sequence of a transition-table run
std::vector<core::Symbol> tm_cell_changes(exec::TmRunner& r, uint64_t maxSteps) {
  std::vector<core::Symbol> seq;
  core::Symbol cur = r.first_output_cell();
  while (r.run_state() == exec::RunState::Running && r.steps() < maxSteps) {
    r.advance();
    core::Symbol now = r.first_output_cell();
    if (now != cur) {
      cur = now;
      seq.push_back(now);
    }
  }
  return seq;
}

}  // namespace

TEST_CASE("compiled straight-line program halts with 1 at cell one") {
  auto m = compile_machine(write_one_program());
  exec::TmRunner r(m, {});
  auto v = limits::zeno_run(r, {});
  REQUIRE(v.kind == limits::ZenoVerdict::Kind::ClassicallyHalted);
  CHECK(v.cellOneValue == "1");
  CHECK(v.computesBit);  // park2 leaves the head at 2
}

TEST_CASE("compiled counter loop halts like the reference") {
  auto ref = tmc::reference_interpret(counter_program(10), {});
  auto m = compile_machine(counter_program(10));
  exec::TmRunner r(m, {});
  auto v = exec::run(r, {.maxSteps = 2000000, .maxStoredFingerprints = 1 << 20});
  REQUIRE(v.kind == exec::RunVerdict::Kind::HaltedWithOutput);
  CHECK(core::word_to_string(v.outputWord) == core::word_to_string(ref.finalOutput));
}

TEST_CASE("bounded_simulate cannot be compiled") {
  CHECK_THROWS_AS((void)tmc::compile(tmc::corpus_halting_probe(true)), tmc::CompileError);
  try {
    (void)tmc::compile(tmc::corpus_halting_probe(false));
    FAIL("expected CompileError");
  } catch (const tmc::CompileError& e) {
    CHECK(e.kind == tmc::CompileError::Kind::UncompilablePrimitive);
  }
}

TEST_CASE("compiled primality agrees with the reference on assorted values") {
  for (uint64_t n : {0ULL, 1ULL, 2ULL, 3ULL, 4ULL, 7ULL, 12ULL, 13ULL, 25ULL, 97ULL}) {
    ProgramBuilder b("prime-check");
    b.set("n", n);
    b.is_prime("p", "n");
    b.if_begin("p", CmpOp::Eq, 1);
    b.write1("1");
    b.else_begin();
    b.write1("0");
    b.block_end();
    b.park2();
    ProgramIR prog = b.take();

    auto ref = tmc::reference_interpret(prog, {});
    REQUIRE(ref.halted);

    auto m = compile_machine(prog);
    exec::TmRunner r(m, {});
    auto v = exec::run(r, {.maxSteps = 3000000, .maxStoredFingerprints = 1 << 20});
    CAPTURE(n);
    REQUIRE(v.kind == exec::RunVerdict::Kind::HaltedWithOutput);
    CHECK(core::word_to_string(v.outputWord) == core::word_to_string(ref.finalOutput));
  }
}

TEST_CASE("compiled digit search matches the macro run exactly") {
  auto prog = tmc::corpus_digit_search("11");
  auto ref = tmc::reference_interpret(prog, core::word_from_chars("0110"));
  REQUIRE(ref.halted);

  auto m = compile_machine(prog, 8);
  exec::TmRunner r(m, core::word_from_chars("0110"));
  auto v = exec::run(r, {.maxSteps = 1000000, .maxStoredFingerprints = 1 << 20});
  REQUIRE(v.kind == exec::RunVerdict::Kind::HaltedWithOutput);
  CHECK(core::word_to_string(v.outputWord) == core::word_to_string(ref.finalOutput));
  CHECK(r.output_head_position() == 2);
  // both consumed the same number of stream symbols
  CHECK(r.config().inputHead == 4);
}

TEST_CASE("compiled mini twin prime tracks the reference change sequence") {
  ProgramIR prog = mini_twin_prime(10);

  tmc::ReferenceOptions opts;
  opts.stepCap = 700;  // a bit over two windows
  auto ref = tmc::reference_interpret(prog, {}, opts);
  REQUIRE(ref.maxRegisterValue < 256);

  auto m = compile_machine(prog, 8);
  exec::TmRunner r(m, {});
  auto compiled = tm_cell_changes(r, 30000000);
  REQUIRE(r.run_state() == exec::RunState::Running);  // diverges by design

  auto macroSeq = observed_changes(ref);
  // compare the common prefix of the two change sequences
  size_t n = std::min(compiled.size(), macroSeq.size());
  REQUIRE(n >= 4);
  for (size_t i = 0; i < n; ++i) {
    CAPTURE(i);
    CHECK(compiled[i] == macroSeq[i]);
  }
}

TEST_CASE("compiler rejects constants wider than the register field") {
  ProgramBuilder b("wide");
  b.set("x", 300);
  ProgramIR prog = b.take();
  tmc::CompileOptions opts;
  opts.registerWidth = 8;
  try {
    (void)tmc::compile(prog, opts);
    FAIL("expected CompileError");
  } catch (const tmc::CompileError& e) {
    CHECK(e.kind == tmc::CompileError::Kind::ConstantTooWide);
  }
}

TEST_CASE("compiler rejects loops that drift the output head") {
  ProgramBuilder b("drift");
  b.set("x", 1);
  b.while_begin("x", CmpOp::Gt, 0);
  b.advance_out();
  b.block_end();
  ProgramIR prog = b.take();
  try {
    (void)tmc::compile(prog);
    FAIL("expected CompileError");
  } catch (const tmc::CompileError& e) {
    CHECK(e.kind == tmc::CompileError::Kind::OutputHeadUntracked);
  }
}

TEST_CASE("compiled saturating subtraction clamps at zero like the macro") {
  ProgramBuilder b("sat");
  b.set("x", 3);
  b.set("y", 7);
  b.sub_reg("x", "y");  // 3 - 7 saturates to 0
  b.sub("y", 9);        // 7 - 9 saturates to 0
  b.if_begin("x", CmpOp::Eq, 0);
  b.if_begin("y", CmpOp::Eq, 0);
  b.write1("1");
  b.block_end();
  b.block_end();
  b.park2();
  ProgramIR prog = b.take();

  auto ref = tmc::reference_interpret(prog, {});
  REQUIRE(ref.halted);
  REQUIRE(core::word_to_string(ref.finalOutput) == "1");

  auto m = compile_machine(prog, 8);
  exec::TmRunner r(m, {});
  auto v = exec::run(r, {.maxSteps = 500000, .maxStoredFingerprints = 1 << 20});
  REQUIRE(v.kind == exec::RunVerdict::Kind::HaltedWithOutput);
  CHECK(core::word_to_string(v.outputWord) == "1");
}
