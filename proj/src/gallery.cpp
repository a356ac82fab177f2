#include "zenosim/gallery.hpp"

namespace zenosim::gallery {

using core::kBlank;
using core::MachineDescription;
using core::Move;
using core::Symbol;

namespace {

struct Builder {
  MachineDescription d;

  Builder(std::string name, std::set<Symbol> in, std::set<Symbol> work, std::set<Symbol> out) {
    d.name = std::move(name);
    d.inputAlphabet = std::move(in);
    d.workAlphabet = std::move(work);
    d.outputAlphabet = std::move(out);
    d.inputAlphabet.insert(kBlank);
    d.workAlphabet.insert(kBlank);
    d.outputAlphabet.insert(kBlank);
  }

  Builder& states(std::set<std::string> ss, std::string start, std::set<std::string> halts = {}) {
    d.states = std::move(ss);
    d.startState = std::move(start);
    d.haltStates = std::move(halts);
    return *this;
  }

  Builder& rule(std::string state, Symbol in, Symbol work, Symbol out, std::string next,
                Symbol writeWork, Symbol writeOutput, const char moves[4]) {
    core::TransitionRule r;
    r.key = {std::move(state), std::move(in), std::move(work), std::move(out)};
    r.action.nextState = std::move(next);
    r.action.writeWork = std::move(writeWork);
    r.action.writeOutput = std::move(writeOutput);
    r.action.moveInput = *core::move_from_char(moves[0]);
    r.action.moveWork = *core::move_from_char(moves[1]);
    r.action.moveOutput = *core::move_from_char(moves[2]);
    d.rules.push_back(std::move(r));
    return *this;
  }

  // Same action for every input-alphabet symbol.
  Builder& rule_any_in(const std::string& state, const Symbol& work, const Symbol& out,
                       const std::string& next, const Symbol& writeWork,
                       const Symbol& writeOutput, const char moves[4]) {
    for (const Symbol& a : d.inputAlphabet) {
      rule(state, a, work, out, next, writeWork, writeOutput, moves);
    }
    return *this;
  }
};

}  // namespace

MachineDescription increment_machine() {
  Builder b("increment", {"0", "1"}, {"0", "1"}, {"0", "1"});
  b.states({"c", "r", "lo", "e", "done"}, "c", {"done"});
  // copy input onto the work tape
  b.rule("c", "0", "_", "_", "c", "0", "_", "RRS");
  b.rule("c", "1", "_", "_", "c", "1", "_", "RRS");
  b.rule("c", "_", "_", "_", "r", "_", "_", "SLS");
  // ripple the carry leftwards from the low bit
  b.rule("r", "_", "1", "_", "r", "0", "_", "SLS");
  b.rule("r", "_", "0", "_", "lo", "1", "_", "SLS");
  b.rule("r", "_", "_", "_", "e", "1", "_", "SSS");  // carry past the high bit
  // locate the high bit
  b.rule("lo", "_", "0", "_", "lo", "0", "_", "SLS");
  b.rule("lo", "_", "1", "_", "lo", "1", "_", "SLS");
  b.rule("lo", "_", "_", "_", "e", "_", "_", "SRS");
  // emit the result
  b.rule("e", "_", "0", "_", "e", "0", "0", "SRR");
  b.rule("e", "_", "1", "_", "e", "1", "1", "SRR");
  b.rule("e", "_", "_", "_", "done", "_", "_", "SSS");
  return b.d;
}

MachineDescription parity_machine() {
  Builder b("parity", {"0", "1"}, {}, {"0", "1"});
  b.states({"even", "odd", "park"}, "even", {"park"});
  b.rule("even", "0", "_", "_", "odd", "_", "_", "RSS");
  b.rule("even", "1", "_", "_", "odd", "_", "_", "RSS");
  b.rule("odd", "0", "_", "_", "even", "_", "_", "RSS");
  b.rule("odd", "1", "_", "_", "even", "_", "_", "RSS");
  b.rule("even", "_", "_", "_", "park", "_", "0", "SSR");
  b.rule("odd", "_", "_", "_", "park", "_", "1", "SSR");
  return b.d;
}

MachineDescription copy_machine() {
  Builder b("copy", {"0", "1"}, {}, {"0", "1"});
  b.states({"k", "done"}, "k", {"done"});
  b.rule("k", "0", "_", "_", "k", "_", "0", "RSR");
  b.rule("k", "1", "_", "_", "k", "_", "1", "RSR");
  b.rule("k", "_", "_", "_", "done", "_", "_", "SSS");
  return b.d;
}

MachineDescription loop_in_place() {
  Builder b("loop-in-place", {}, {}, {});
  b.states({"l"}, "l");
  b.rule_any_in("l", "_", "_", "l", "_", "_", "SSS");
  return b.d;
}

MachineDescription right_marcher() {
  Builder b("right-marcher", {}, {}, {});
  b.states({"m"}, "m");
  b.rule_any_in("m", "_", "_", "m", "_", "_", "SSR");
  return b.d;
}

MachineDescription flip01() {
  Builder b("flip01", {}, {}, {"0", "1"});
  b.states({"f"}, "f");
  b.rule_any_in("f", "_", "_", "f", "_", "0", "SSS");
  b.rule_any_in("f", "_", "0", "f", "_", "1", "SSS");
  b.rule_any_in("f", "_", "1", "f", "_", "0", "SSS");
  return b.d;
}

MachineDescription flip_blank1() {
  Builder b("flip-blank1", {}, {}, {"1"});
  b.states({"f"}, "f");
  b.rule_any_in("f", "_", "_", "f", "_", "1", "SSS");
  b.rule_any_in("f", "_", "1", "f", "_", "_", "SSS");
  return b.d;
}

MachineDescription write0_park_loop() {
  Builder b("write0-park-loop", {}, {}, {"0"});
  b.states({"w", "p"}, "w");
  b.rule_any_in("w", "_", "_", "p", "_", "0", "SSR");
  b.rule_any_in("p", "_", "_", "p", "_", "_", "SSS");
  return b.d;
}

MachineDescription write1_then_loop() {
  Builder b("write1-then-loop", {}, {}, {"1"});
  b.states({"w", "p"}, "w");
  b.rule_any_in("w", "_", "_", "p", "_", "1", "SSR");
  b.rule_any_in("p", "_", "_", "p", "_", "_", "SSS");
  return b.d;
}

MachineDescription boundary_input() {
  Builder b("boundary-input", {"0", "1"}, {}, {});
  b.states({"b"}, "b");
  b.rule_any_in("b", "_", "_", "b", "_", "_", "LSS");
  return b.d;
}

MachineDescription boundary_output() {
  Builder b("boundary-output", {"0", "1"}, {}, {});
  b.states({"b"}, "b");
  b.rule_any_in("b", "_", "_", "b", "_", "_", "SSL");
  return b.d;
}

MachineDescription missing_rule() {
  Builder b("missing-rule", {}, {}, {});
  b.states({"a", "b"}, "a");
  b.rule_any_in("a", "_", "_", "b", "_", "_", "SSS");
  return b.d;
}

MachineDescription immediate_halt() {
  Builder b("immediate-halt", {"0", "1"}, {}, {});
  b.states({"h"}, "h", {"h"});
  return b.d;
}

MachineDescription halt_head_far() {
  Builder b("halt-head-far", {}, {}, {"1"});
  b.states({"m1", "m2", "m3", "m4", "done"}, "m1", {"done"});
  b.rule_any_in("m1", "_", "_", "m2", "_", "1", "SSR");
  b.rule_any_in("m2", "_", "_", "m3", "_", "_", "SSR");
  b.rule_any_in("m3", "_", "_", "m4", "_", "_", "SSR");
  b.rule_any_in("m4", "_", "_", "done", "_", "_", "SSR");
  return b.d;
}

MachineDescription two_phase() {
  Builder b("two-phase", {}, {"1"}, {"1"});
  b.states({"s", "f", "h"}, "s", {"h"});
  b.rule_any_in("s", "_", "_", "f", "_", "1", "SSS");
  b.rule_any_in("s", "_", "1", "h", "_", "1", "SSS");
  b.rule_any_in("f", "_", "1", "f", "_", "_", "SSS");
  b.rule_any_in("f", "_", "_", "f", "_", "1", "SSS");
  return b.d;
}

MachineDescription work_bouncer() {
  Builder b("work-bouncer", {}, {}, {});
  b.states({"wb1", "wb2"}, "wb1");
  b.rule_any_in("wb1", "_", "_", "wb2", "_", "_", "SRS");
  b.rule_any_in("wb2", "_", "_", "wb1", "_", "_", "SLS");
  return b.d;
}

MachineDescription constant0_solver() {
  Builder b("constant-0", {"0", "1"}, {}, {"0", "1"});
  b.states({"s", "p"}, "s", {"p"});
  b.rule_any_in("s", "_", "_", "p", "_", "0", "SSR");
  return b.d;
}

MachineDescription constant1_solver() {
  Builder b("constant-1", {"0", "1"}, {}, {"0", "1"});
  b.states({"s", "p"}, "s", {"p"});
  b.rule_any_in("s", "_", "_", "p", "_", "1", "SSR");
  return b.d;
}

MachineDescription alternate10_halt() {
  Builder b("alternate10-halt", {"0", "1"}, {}, {"0", "1"});
  b.states({"a1", "a2", "p"}, "a1", {"p"});
  b.rule_any_in("a1", "_", "_", "a2", "_", "1", "SSS");
  b.rule_any_in("a2", "_", "1", "p", "_", "0", "SSR");
  return b.d;
}

MachineDescription work_counter() {
  Builder b("work-counter", {}, {"1"}, {});
  b.states({"g"}, "g");
  b.rule_any_in("g", "_", "_", "g", "1", "_", "SRS");
  return b.d;
}

MachineDescription bounded_length_solver(int maxLen) {
  Builder b("bounded-length-" + std::to_string(maxLen), {"0", "1"}, {}, {"0", "1"});
  std::set<std::string> states = {"done"};
  for (int i = 0; i <= maxLen; ++i) states.insert("q" + std::to_string(i));
  b.states(std::move(states), "q0", {"done"});
  for (int i = 0; i < maxLen; ++i) {
    std::string cur = "q" + std::to_string(i);
    std::string next = "q" + std::to_string(i + 1);
    b.rule(cur, "0", "_", "_", next, "_", "_", "RSS");
    b.rule(cur, "1", "_", "_", next, "_", "_", "RSS");
    b.rule(cur, "_", "_", "_", "done", "_", "1", "SSR");
  }
  std::string last = "q" + std::to_string(maxLen);
  b.rule(last, "0", "_", "_", "done", "_", "0", "SSR");
  b.rule(last, "1", "_", "_", "done", "_", "0", "SSR");
  b.rule(last, "_", "_", "_", "done", "_", "1", "SSR");
  return b.d;
}

const std::vector<GalleryEntry>& all() {
  static const std::vector<GalleryEntry> entries = [] {
    std::vector<GalleryEntry> v;
    auto add = [&](MachineDescription m, std::string summary) {
      std::string name = m.name;
      v.push_back({std::move(name), std::move(summary), std::move(m)});
    };
    add(increment_machine(), "halts with the binary successor of its input");
    add(parity_machine(), "halts with the parity bit of the input length, head at 2");
    add(copy_machine(), "halts with the input copied to the output tape");
    add(loop_in_place(), "immediate 1-cycle, never halts");
    add(right_marcher(), "output head escapes rightwards, no repeat");
    add(flip01(), "first output cell alternates 0 and 1 forever");
    add(flip_blank1(), "first output cell alternates blank and 1 forever");
    add(write0_park_loop(), "writes 0 at cell 1, parks the head at 2, loops");
    add(write1_then_loop(), "writes 1 at cell 1, parks the head at 2, loops");
    add(boundary_input(), "demands a left move at input cell 1");
    add(boundary_output(), "demands a left move at output cell 1");
    add(missing_rule(), "steps once into a state without rules");
    add(immediate_halt(), "starts in a halt state");
    add(halt_head_far(), "halts with the output head at cell 5");
    add(two_phase(), "diverges, then halts right after a limit stage");
    add(work_bouncer(), "work head bounces forever, output untouched");
    add(constant0_solver(), "answers 0 on every input");
    add(constant1_solver(), "answers 1 on every input");
    add(alternate10_halt(), "writes 1 then 0 at cell 1, halts at head 2");
    add(work_counter(), "work tape extent grows forever, no repeat");
    add(bounded_length_solver(64), "answers 1 iff the input is shorter than 64 symbols");
    return v;
  }();
  return entries;
}

const core::MachineDescription* find(const std::string& name) {
  for (const GalleryEntry& e : all()) {
    if (e.name == name) return &e.machine;
  }
  return nullptr;
}

}  // namespace zenosim::gallery
