#include <functional>
#include <map>

#include "zenosim/tmc.hpp"

// Transition-table backend. Registers live on the work tape as fixed-width
// binary fields (MSB first) laid out as  @ f0 | f1 | ... | fn-1 $  with the
// head parked on '@' between statements. Every gadget entry state therefore
// starts by reading '@'. Arithmetic that leaves the field width raises a
// dead "ovf" state, which shows up as StuckMissingRule rather than silent
// wraparound.

namespace zenosim::tmc {

using core::kBlank;
using core::Move;
using core::Symbol;

namespace {

struct Gen {
  const CompileOptions opts;
  int W;
  core::MachineDescription d;
  std::vector<Symbol> inSyms;
  std::vector<Symbol> outSyms;
  int counter = 0;
  std::string overflow = "ovf";
  std::map<std::string, std::string> homeCache;

  explicit Gen(const CompileOptions& o) : opts(o), W(o.registerWidth) {}

  std::string fresh(const std::string& hint) {
    return hint + "." + std::to_string(counter++);
  }

  void declare(const std::string& state) { d.states.insert(state); }

  void raw_rule(const std::string& state, const Symbol& in, const Symbol& work,
                const Symbol& out, const std::string& next, const Symbol& ww, const Symbol& wo,
                Move mi, Move mw, Move mo) {
    core::TransitionRule r;
    r.key = {state, in, work, out};
    r.action = {next, ww, wo, mi, mw, mo};
    d.rules.push_back(std::move(r));
    declare(state);
    declare(next);
  }

  // Work-tape step, input/output untouched and unread in effect (all read
  // combinations enumerated).
  void wrule(const std::string& state, const Symbol& workRead, const std::string& next,
             const Symbol& workWrite, Move mw) {
    for (const Symbol& a : inSyms) {
      for (const Symbol& o : outSyms) {
        raw_rule(state, a, workRead, o, next, workWrite, o, Move::Stay, mw, Move::Stay);
      }
    }
  }

  // Output-tape step taken with the work head resting on '@'.
  void orule(const std::string& state, const std::string& next, const Symbol& outWriteOrKeep,
             bool keepOut, Move mo) {
    for (const Symbol& a : inSyms) {
      for (const Symbol& o : outSyms) {
        raw_rule(state, a, "@", o, next, "@", keepOut ? o : outWriteOrKeep, Move::Stay,
                 Move::Stay, mo);
      }
    }
  }

  // Scans left to '@', then hands over; memoized per target.
  std::string walk_home(const std::string& to) {
    auto it = homeCache.find(to);
    if (it != homeCache.end()) return it->second;
    std::string h = fresh("home");
    for (const Symbol& w : {Symbol("0"), Symbol("1"), Symbol("|"), Symbol("$")}) {
      wrule(h, w, h, w, Move::Left);
    }
    wrule(h, "@", to, "@", Move::Stay);
    homeCache[to] = h;
    return h;
  }

  // Entry state (reading '@') that walks to the given 0-based cell of a
  // field and branches on the bit found there. onBit(b) returns the symbol
  // to write and the state to enter while moving `after`.
  std::string goto_cell(int field, int cell,
                        const std::function<std::pair<Symbol, std::string>(int)>& onBit,
                        Move after) {
    std::string entry = fresh("go");
    std::string cur = entry;
    // cross '@' plus `field` separators
    for (int f = 0; f <= field; ++f) {
      std::string next = fresh("go");
      if (f == 0) {
        wrule(cur, "@", next, "@", Move::Right);
      } else {
        for (const Symbol& b : {Symbol("0"), Symbol("1")}) wrule(cur, b, cur, b, Move::Right);
        wrule(cur, "|", next, "|", Move::Right);
      }
      cur = next;
    }
    for (int i = 0; i < cell; ++i) {
      std::string next = fresh("go");
      for (const Symbol& b : {Symbol("0"), Symbol("1")}) wrule(cur, b, next, b, Move::Right);
      cur = next;
    }
    for (int b = 0; b < 2; ++b) {
      auto [write, next] = onBit(b);
      wrule(cur, b ? "1" : "0", next, write, after);
    }
    return entry;
  }

  // entry reading '@': writes value into the field, exits at `exit` (reading
  // '@' again).
  std::string set_const(int field, uint64_t value, const std::string& exit) {
    std::string home = walk_home(exit);
    // chain that writes all W bits left to right
    std::vector<std::string> writers(static_cast<size_t>(W));
    for (int i = 0; i < W; ++i) writers[static_cast<size_t>(i)] = fresh("setc");
    for (int i = 0; i < W; ++i) {
      int bit = (value >> (W - 1 - i)) & 1;
      std::string next = i + 1 < W ? writers[static_cast<size_t>(i + 1)] : home;
      for (const Symbol& b : {Symbol("0"), Symbol("1")}) {
        wrule(writers[static_cast<size_t>(i)], b, next, bit ? "1" : "0", Move::Right);
      }
    }
    // seek to the field start first
    std::string entry = fresh("setc");
    std::string cur = entry;
    for (int f = 0; f <= field; ++f) {
      std::string next = f + 1 <= field ? fresh("setc") : writers[0];
      if (f == 0) {
        wrule(cur, "@", next, "@", Move::Right);
      } else {
        for (const Symbol& b : {Symbol("0"), Symbol("1")}) wrule(cur, b, cur, b, Move::Right);
        wrule(cur, "|", next, "|", Move::Right);
      }
      cur = next;
    }
    return entry;
  }

  // dst <- dst (+|-) value, ripple from the LSB. Overflow/underflow jams in
  // the dead state (subtraction saturates to zero instead when `saturate`).
  std::string add_const(int field, uint64_t value, bool subtract, bool saturate,
                        const std::string& exit) {
    std::string home = walk_home(exit);
    // States per bit position (from LSB) and carry/borrow flag.
    // Walk-in: reach one past the field's last cell, then step left.
    std::string entry = fresh(subtract ? "subc" : "addc");
    std::string cur = entry;
    for (int f = 0; f <= field; ++f) {
      std::string next = fresh("m");
      if (f == 0) {
        wrule(cur, "@", next, "@", Move::Right);
      } else {
        for (const Symbol& b : {Symbol("0"), Symbol("1")}) wrule(cur, b, cur, b, Move::Right);
        wrule(cur, "|", next, "|", Move::Right);
      }
      cur = next;
    }
    // scan to the separator after the field, then back up one cell
    std::string backed = fresh("m");
    for (const Symbol& b : {Symbol("0"), Symbol("1")}) wrule(cur, b, cur, b, Move::Right);
    for (const Symbol& s : {Symbol("|"), Symbol("$")}) wrule(cur, s, backed, s, Move::Left);
    // backed sits on the LSB; ripple forms its own chain
    std::string zeroFill;  // lazily built clamp-to-zero chain for saturation
    auto clamp_entry = [&]() -> std::string {
      if (zeroFill.empty()) zeroFill = walk_home(clamp_field(field, exit));
      return zeroFill;
    };

    std::vector<std::array<std::string, 2>> ripple(static_cast<size_t>(W));
    for (int j = 0; j < W; ++j) {
      ripple[static_cast<size_t>(j)] = {fresh("r"), fresh("r")};
    }
    // backed behaves like ripple state j=0 with carry 0
    auto wire = [&](const std::string& st, int j, int carryIn) {
      uint64_t kbit = (value >> j) & 1;
      for (int b = 0; b < 2; ++b) {
        int total;
        int outBit;
        int carryOut;
        if (!subtract) {
          total = b + static_cast<int>(kbit) + carryIn;
          outBit = total & 1;
          carryOut = total >> 1;
        } else {
          int diff = b - static_cast<int>(kbit) - carryIn;
          outBit = (diff & 1) ? 1 : 0;
          carryOut = diff < 0 ? 1 : 0;
        }
        uint64_t remaining = value >> (j + 1);
        std::string next;
        if (j + 1 >= W) {
          if (carryOut || remaining) {
            next = saturate && subtract ? clamp_entry() : overflow;
          } else {
            next = home;
          }
        } else if (carryOut == 0 && remaining == 0) {
          next = home;  // nothing left to propagate
        } else {
          next = ripple[static_cast<size_t>(j + 1)][static_cast<size_t>(carryOut)];
        }
        wrule(st, b ? "1" : "0", next, outBit ? "1" : "0", Move::Left);
      }
      // Falling off the field's left edge means the remaining work was zero,
      // which the `next = home` arc above already covers; a separator read
      // can still happen when W bits were processed via the j loop, handled
      // by j+1>=W.
    };
    wire(backed, 0, 0);
    for (int j = 1; j < W; ++j) {
      wire(ripple[static_cast<size_t>(j)][0], j, 0);
      wire(ripple[static_cast<size_t>(j)][1], j, 1);
    }
    return entry;
  }

  // Entry reading '@' that overwrites a whole field with zeros, then exits.
  std::string clamp_field(int field, const std::string& exit) {
    std::string home = walk_home(exit);
    std::vector<std::string> zs(static_cast<size_t>(W));
    for (int i = 0; i < W; ++i) zs[static_cast<size_t>(i)] = fresh("clamp");
    for (int i = 0; i < W; ++i) {
      std::string next = i + 1 < W ? zs[static_cast<size_t>(i + 1)] : home;
      for (const Symbol& b : {Symbol("0"), Symbol("1")}) {
        wrule(zs[static_cast<size_t>(i)], b, next, "0", Move::Right);
      }
    }
    return set_nothing_seek(field, zs[0]);
  }

  // Helper used by the clamp path: entry reading '@', walks to field start,
  // hands to `to` (which expects to sit on the field's first cell).
  std::string set_nothing_seek(int field, const std::string& to) {
    std::string entry = fresh("seek");
    std::string cur = entry;
    for (int f = 0; f <= field; ++f) {
      std::string next = f == field ? to : fresh("seek");
      if (f == 0) {
        wrule(cur, "@", next, "@", Move::Right);
      } else {
        for (const Symbol& b : {Symbol("0"), Symbol("1")}) wrule(cur, b, cur, b, Move::Right);
        wrule(cur, "|", next, "|", Move::Right);
      }
      cur = next;
    }
    return entry;
  }

  // Three-way comparison of a field against a constant, MSB first.
  std::string cmp_const(int field, uint64_t value, const std::string& exitLt,
                        const std::string& exitEq, const std::string& exitGt) {
    std::string homeLt = walk_home(exitLt);
    std::string homeEq = walk_home(exitEq);
    std::string homeGt = walk_home(exitGt);
    std::vector<std::string> rounds(static_cast<size_t>(W));
    for (int i = 0; i < W; ++i) rounds[static_cast<size_t>(i)] = fresh("cmpc");
    std::string seek = set_nothing_seek(field, rounds[0]);
    for (int i = 0; i < W; ++i) {
      int kbit = static_cast<int>((value >> (W - 1 - i)) & 1);
      std::string onEqual = i + 1 < W ? rounds[static_cast<size_t>(i + 1)] : homeEq;
      for (int b = 0; b < 2; ++b) {
        std::string next;
        if (b < kbit) {
          next = homeLt;
        } else if (b > kbit) {
          next = homeGt;
        } else {
          next = onEqual;
        }
        wrule(rounds[static_cast<size_t>(i)], b ? "1" : "0", next, b ? "1" : "0", Move::Right);
      }
    }
    return seek;
  }

  // Generic two-field pass: per round, read the source bit, walk home, act
  // on the destination bit.
  // kind: 0 copy (dst <- src), 1 add (dst += src), 2 sub (dst -= src).
  std::string two_field_arith(int srcField, int dstField, int kind, const std::string& exit) {
    // rounds LSB-first; carry per round
    // stateA[j][carry]: about to read src bit j (cell W-1-j)
    // after reading b: stateB[j][carry][b]: about to act on dst bit j
    std::string entry;
    std::vector<std::array<std::string, 2>> nextEntry(static_cast<size_t>(W + 1));
    // Build J-th round lazily from last to first so "next" names exist.
    // Entries hold '@'-keyed states; wiring wraps them in a home walk.
    for (int j = W; j >= 0; --j) {
      if (j == W) {
        // a surviving borrow saturates the destination to zero; a surviving
        // carry has nowhere to go
        std::string onCarry = kind == 2 ? clamp_field(dstField, exit) : overflow;
        nextEntry[static_cast<size_t>(j)] = {exit, onCarry};
        continue;
      }
      int cell = W - 1 - j;
      std::array<std::string, 2> mine;
      int carries = kind == 0 ? 1 : 2;
      for (int cy = 0; cy < carries; ++cy) {
        // act on dst for each src bit value
        std::array<std::string, 2> actForBit;
        for (int b = 0; b < 2; ++b) {
          if (kind == 0) {
            // plain write, no dst read needed
            std::string writer = goto_cell(
                dstField, cell,
                [&](int) {
                  return std::make_pair(Symbol(b ? "1" : "0"),
                                        walk_home(nextEntry[static_cast<size_t>(j + 1)][0]));
                },
                Move::Stay);
            actForBit[static_cast<size_t>(b)] = writer;
          } else {
            std::string acter = goto_cell(
                dstField, cell,
                [&](int dbit) {
                  int outBit, carryOut;
                  if (kind == 1) {
                    int total = dbit + b + cy;
                    outBit = total & 1;
                    carryOut = total >> 1;
                  } else {
                    int diff = dbit - b - cy;
                    outBit = (diff & 1) ? 1 : 0;
                    carryOut = diff < 0 ? 1 : 0;
                  }
                  std::string next =
                      walk_home(nextEntry[static_cast<size_t>(j + 1)][static_cast<size_t>(carryOut)]);
                  return std::make_pair(Symbol(outBit ? "1" : "0"), next);
                },
                Move::Stay);
            actForBit[static_cast<size_t>(b)] = acter;
          }
        }
        std::string reader = goto_cell(
            srcField, cell,
            [&](int b) {
              return std::make_pair(Symbol(b ? "1" : "0"),
                                    walk_home(actForBit[static_cast<size_t>(b)]));
            },
            Move::Stay);
        mine[static_cast<size_t>(cy)] = reader;
      }
      if (carries == 1) mine[1] = mine[0];
      nextEntry[static_cast<size_t>(j)] = mine;
      if (j == 0) entry = mine[0];
    }
    return entry;
  }

  // Three-way comparison of two fields, MSB first.
  std::string cmp_reg(int f1, int f2, const std::string& exitLt, const std::string& exitEq,
                      const std::string& exitGt) {
    std::string homeLt = walk_home(exitLt);
    std::string homeEq = walk_home(exitEq);
    std::string homeGt = walk_home(exitGt);
    std::string entry;
    std::string nextRound;
    for (int j = W - 1; j >= 0; --j) {
      // next round entries are '@'-keyed; the equal path hands over from
      // mid-field, so wrap them in a home walk
      std::string onEqualNext = j + 1 < W ? walk_home(nextRound) : homeEq;
      // second lookup depends on the first bit read
      std::array<std::string, 2> second;
      for (int b = 0; b < 2; ++b) {
        second[static_cast<size_t>(b)] = goto_cell(
            f2, j,
            [&, b](int dbit) {
              std::string next;
              if (b < dbit) {
                next = homeLt;
              } else if (b > dbit) {
                next = homeGt;
              } else {
                next = onEqualNext;
              }
              return std::make_pair(Symbol(dbit ? "1" : "0"), next);
            },
            Move::Stay);
      }
      std::string first = goto_cell(
          f1, j,
          [&](int b) {
            return std::make_pair(Symbol(b ? "1" : "0"),
                                  walk_home(second[static_cast<size_t>(b)]));
          },
          Move::Stay);
      nextRound = first;
      if (j == 0) entry = first;
    }
    return entry;
  }

};

struct CompileCtx {
  Gen gen;
  ProgramIR prog;  // lowered
  std::string endState = "end";

  explicit CompileCtx(const CompileOptions& opts) : gen(opts) {}

  uint32_t scratch(const std::string& name) {
    for (uint32_t i = 0; i < prog.registers.size(); ++i) {
      if (prog.registers[i] == name) return i;
    }
    prog.registers.push_back(name);
    return static_cast<uint32_t>(prog.registers.size() - 1);
  }

  void check_const(uint64_t v) {
    if (gen.W >= 64) return;
    if (v >> gen.W) {
      throw CompileError(CompileError::Kind::ConstantTooWide,
                         "constant " + std::to_string(v) + " does not fit in " +
                             std::to_string(gen.W) + " bits");
    }
  }

  // Lowers is_prime to trial division with incremental squares; rejects
  // bounded_simulate.
  std::vector<Stmt> lower(const std::vector<Stmt>& body) {
    std::vector<Stmt> out;
    for (const Stmt& s : body) {
      switch (s.kind) {
        case Stmt::Kind::BoundedSimulate:
          throw CompileError(CompileError::Kind::UncompilablePrimitive,
                             "bounded_simulate has no transition-table form");
        case Stmt::Kind::IsPrime: {
          uint32_t dst = s.a, src = s.b;
          uint32_t rd = scratch("~d"), rs = scratch("~s"), rr = scratch("~r");
          auto st = [&](Stmt::Kind k, uint32_t a, uint32_t b, uint64_t imm) {
            Stmt x;
            x.kind = k;
            x.a = a;
            x.b = b;
            x.imm = imm;
            return x;
          };
          Stmt ifSmall;
          ifSmall.kind = Stmt::Kind::If;
          ifSmall.cond = {src, CmpOp::Lt, Operand::c(2)};
          ifSmall.body.push_back(st(Stmt::Kind::SetConst, dst, 0, 0));
          Stmt& els = ifSmall;
          els.elseBody.push_back(st(Stmt::Kind::SetConst, dst, 0, 1));
          els.elseBody.push_back(st(Stmt::Kind::SetConst, rd, 0, 2));
          els.elseBody.push_back(st(Stmt::Kind::SetConst, rs, 0, 4));
          Stmt loop;
          loop.kind = Stmt::Kind::While;
          loop.cond = {rs, CmpOp::Le, Operand::r(src)};
          loop.body.push_back(st(Stmt::Kind::SetReg, rr, src, 0));
          Stmt inner;
          inner.kind = Stmt::Kind::While;
          inner.cond = {rr, CmpOp::Ge, Operand::r(rd)};
          inner.body.push_back(st(Stmt::Kind::SubReg, rr, rd, 0));
          loop.body.push_back(std::move(inner));
          Stmt zero;
          zero.kind = Stmt::Kind::If;
          zero.cond = {rr, CmpOp::Eq, Operand::c(0)};
          zero.body.push_back(st(Stmt::Kind::SetConst, dst, 0, 0));
          loop.body.push_back(std::move(zero));
          loop.body.push_back(st(Stmt::Kind::AddReg, rs, rd, 0));
          loop.body.push_back(st(Stmt::Kind::AddReg, rs, rd, 0));
          loop.body.push_back(st(Stmt::Kind::AddConst, rs, 0, 1));
          loop.body.push_back(st(Stmt::Kind::AddConst, rd, 0, 1));
          els.elseBody.push_back(std::move(loop));
          out.push_back(std::move(ifSmall));
          break;
        }
        case Stmt::Kind::While:
        case Stmt::Kind::If: {
          Stmt copy = s;
          copy.body = lower(s.body);
          copy.elseBody = lower(s.elseBody);
          out.push_back(std::move(copy));
          break;
        }
        default:
          out.push_back(s);
          break;
      }
    }
    return out;
  }

  // Compiles a block; returns the entry state. The block finally hands over
  // to `exit`. Tracks the output head position statically; head is the
  // in/out position of the whole block.
  std::string compile_block(const std::vector<Stmt>& body, const std::string& exit, long& head) {
    std::string nextEntry = exit;
    // compile back-to-front so each statement knows its successor
    std::vector<std::string> entries(body.size());
    // Head positions flow front-to-back; compute them first.
    std::vector<long> headAt(body.size() + 1);
    headAt[0] = head;
    for (size_t i = 0; i < body.size(); ++i) {
      headAt[i + 1] = head_after(body[i], headAt[i]);
    }
    head = headAt[body.size()];
    for (size_t i = body.size(); i-- > 0;) {
      entries[i] = compile_stmt(body[i], nextEntry, headAt[i]);
      nextEntry = entries[i];
    }
    return nextEntry;
  }

  long head_after(const Stmt& s, long head) {
    switch (s.kind) {
      case Stmt::Kind::AdvanceOutputHead:
        return head + 1;
      case Stmt::Kind::ParkOutputHeadAtTwo:
        return 2;
      case Stmt::Kind::While: {
        long bodyEnd = head;
        for (const Stmt& inner : s.body) bodyEnd = head_after(inner, bodyEnd);
        if (bodyEnd != head) {
          throw CompileError(CompileError::Kind::OutputHeadUntracked,
                             "loop body moves the output head");
        }
        return head;
      }
      case Stmt::Kind::If: {
        long thenEnd = head, elseEnd = head;
        for (const Stmt& inner : s.body) thenEnd = head_after(inner, thenEnd);
        for (const Stmt& inner : s.elseBody) elseEnd = head_after(inner, elseEnd);
        if (thenEnd != elseEnd) {
          throw CompileError(CompileError::Kind::OutputHeadUntracked,
                             "if branches leave the output head at different cells");
        }
        return thenEnd;
      }
      default:
        return head;
    }
  }

  std::string cond_gadget(const Cond& cond, const std::string& onTrue,
                          const std::string& onFalse) {
    auto route = [&](CmpOp op) {
      // returns (lt, eq, gt) targets for a three-way comparison
      std::array<std::string, 3> t;
      switch (op) {
        case CmpOp::Eq: t = {onFalse, onTrue, onFalse}; break;
        case CmpOp::Ne: t = {onTrue, onFalse, onTrue}; break;
        case CmpOp::Lt: t = {onTrue, onFalse, onFalse}; break;
        case CmpOp::Le: t = {onTrue, onTrue, onFalse}; break;
        case CmpOp::Gt: t = {onFalse, onFalse, onTrue}; break;
        case CmpOp::Ge: t = {onFalse, onTrue, onTrue}; break;
      }
      return t;
    };
    auto t = route(cond.op);
    if (cond.rhs.isRegister) {
      return gen.cmp_reg(static_cast<int>(cond.lhs), static_cast<int>(cond.rhs.reg), t[0], t[1],
                         t[2]);
    }
    check_const(cond.rhs.value);
    return gen.cmp_const(static_cast<int>(cond.lhs), cond.rhs.value, t[0], t[1], t[2]);
  }

  std::string compile_stmt(const Stmt& s, const std::string& next, long head) {
    switch (s.kind) {
      case Stmt::Kind::SetConst:
        check_const(s.imm);
        return gen.set_const(static_cast<int>(s.a), s.imm, next);
      case Stmt::Kind::AddConst:
        check_const(s.imm);
        return gen.add_const(static_cast<int>(s.a), s.imm, false, false, next);
      case Stmt::Kind::SubConst:
        check_const(s.imm);
        return gen.add_const(static_cast<int>(s.a), s.imm, true, true, next);
      case Stmt::Kind::SetReg:
        return gen.two_field_arith(static_cast<int>(s.b), static_cast<int>(s.a), 0, next);
      case Stmt::Kind::AddReg:
        return gen.two_field_arith(static_cast<int>(s.b), static_cast<int>(s.a), 1, next);
      case Stmt::Kind::SubReg:
        return gen.two_field_arith(static_cast<int>(s.b), static_cast<int>(s.a), 2, next);
      case Stmt::Kind::While: {
        // head must be loop-invariant (checked in head_after)
        long h = head;
        std::string condEntryName = gen.fresh("while");
        // body exits back into the condition
        std::string bodyEntry = compile_block(s.body, condEntryName, h);
        std::string condEntry = cond_gadget(s.cond, bodyEntry, next);
        // alias: condEntryName must behave exactly like condEntry
        gen.wrule(condEntryName, "@", condEntry, "@", Move::Stay);
        return condEntry;
      }
      case Stmt::Kind::If: {
        long h1 = head, h2 = head;
        std::string thenEntry = compile_block(s.body, next, h1);
        std::string elseEntry =
            s.elseBody.empty() ? next : compile_block(s.elseBody, next, h2);
        return cond_gadget(s.cond, thenEntry, elseEntry);
      }
      case Stmt::Kind::WriteCellOne: {
        // walk to cell 1, write, walk back
        std::string cur = gen.fresh("w1");
        std::string entry = cur;
        for (long p = head; p > 1; --p) {
          std::string nxt = gen.fresh("w1");
          gen.orule(cur, nxt, "", true, Move::Left);
          cur = nxt;
        }
        // cur sits at cell 1: write, then return
        if (head == 1) {
          gen.orule(cur, next, s.sym, false, Move::Stay);
        } else {
          std::string back = gen.fresh("w1");
          gen.orule(cur, head == 2 ? next : back, s.sym, false, Move::Right);
          std::string c2 = back;
          for (long p = 2; p < head; ++p) {
            std::string nxt = p + 1 == head ? next : gen.fresh("w1");
            gen.orule(c2, nxt, "", true, Move::Right);
            c2 = nxt;
          }
        }
        return entry;
      }
      case Stmt::Kind::AdvanceOutputHead: {
        std::string entry = gen.fresh("adv");
        gen.orule(entry, next, "", true, Move::Right);
        return entry;
      }
      case Stmt::Kind::ParkOutputHeadAtTwo: {
        std::string entry = gen.fresh("park");
        std::string cur = entry;
        long p = head;
        if (p == 2) {
          gen.orule(entry, next, "", true, Move::Stay);
          return entry;
        }
        while (p != 2) {
          Move m = p < 2 ? Move::Right : Move::Left;
          long q = p < 2 ? p + 1 : p - 1;
          std::string nxt = q == 2 ? next : gen.fresh("park");
          gen.orule(cur, nxt, "", true, m);
          cur = nxt;
          p = q;
        }
        return entry;
      }
      case Stmt::Kind::ReadInput: {
        std::string entry = gen.fresh("read");
        // one rule per input symbol: record its index, advance the head
        for (size_t i = 0; i <= prog.inputSymbols.size(); ++i) {
          bool isBlank = i == prog.inputSymbols.size();
          Symbol sym = isBlank ? kBlank : prog.inputSymbols[i];
          check_const(i);
          std::string setter = gen.set_const(static_cast<int>(s.a), i, next);
          for (const Symbol& o : gen.outSyms) {
            gen.raw_rule(entry, sym, "@", o, setter, "@", o,
                         isBlank ? Move::Stay : Move::Right, Move::Stay, Move::Stay);
          }
        }
        return entry;
      }
      default:
        throw CompileError(CompileError::Kind::UncompilablePrimitive, "unexpected statement");
    }
  }
};

}  // namespace

core::MachineDescription compile(const ProgramIR& p, const CompileOptions& opts) {
  CompileCtx ctx(opts);
  ctx.prog = p;
  ctx.prog.body = ctx.lower(p.body);

  Gen& g = ctx.gen;
  g.d.name = p.name + "-compiled";
  g.inSyms.assign(p.inputSymbols.begin(), p.inputSymbols.end());
  g.inSyms.push_back(kBlank);

  // output alphabet: blank plus every symbol the program can write
  std::set<Symbol> outs = {kBlank};
  std::function<void(const std::vector<Stmt>&)> collect = [&](const std::vector<Stmt>& body) {
    for (const Stmt& s : body) {
      if (s.kind == Stmt::Kind::WriteCellOne) outs.insert(s.sym);
      collect(s.body);
      collect(s.elseBody);
    }
  };
  collect(ctx.prog.body);
  g.outSyms.assign(outs.begin(), outs.end());

  g.d.inputAlphabet.insert(g.inSyms.begin(), g.inSyms.end());
  g.d.outputAlphabet.insert(g.outSyms.begin(), g.outSyms.end());
  g.d.workAlphabet = {kBlank, "@", "|", "$", "0", "1"};

  int n = static_cast<int>(ctx.prog.registers.size());
  if (n == 0) {
    // no registers: still lay out one dummy field so the machinery is uniform
    ctx.prog.registers.push_back("~zero");
    n = 1;
  }

  g.d.states.insert(ctx.endState);
  g.d.haltStates.insert(ctx.endState);
  g.d.states.insert(g.overflow);

  long head = 1;
  std::string programEntry = ctx.compile_block(ctx.prog.body, ctx.endState, head);

  // Prologue writes  @ 0^W | 0^W | ... $  and walks home.
  std::string home = g.walk_home(programEntry);
  int cells = 1 + n * g.W + (n - 1) + 1;
  std::string cur = "boot";
  for (int i = 0; i < cells; ++i) {
    Symbol write;
    if (i == 0) {
      write = "@";
    } else if (i == cells - 1) {
      write = "$";
    } else {
      int k = i - 1;  // position after '@'
      write = (k % (g.W + 1)) < g.W ? "0" : "|";
    }
    std::string nxt = i + 1 < cells ? "boot." + std::to_string(i + 1) : home;
    g.wrule(cur, kBlank, nxt, write, i + 1 < cells ? Move::Right : Move::Left);
    cur = nxt;
  }
  g.d.startState = "boot";
  g.d.states.insert("boot");

  return g.d;
}

}  // namespace zenosim::tmc
