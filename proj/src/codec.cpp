#include "zenosim/codec.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace zenosim::codec {

using core::MachineDescription;
using core::Move;
using core::RuleAction;
using core::RuleKey;
using core::Symbol;
using core::TransitionRule;

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
           line[i] != '#') {
      ++i;
    }
    tokens.emplace_back(line.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

std::string bits_to_string(const BitString& bits) {
  std::string s;
  s.reserve(bits.size());
  for (uint8_t b : bits) s += b ? '1' : '0';
  return s;
}

BitString bits_from_string(std::string_view text) {
  BitString bits;
  bits.reserve(text.size());
  for (char c : text) bits.push_back(c == '1' ? 1 : 0);
  return bits;
}

ParseResult parse_description(std::string_view text) {
  ParseErrors errors;
  MachineDescription desc;
  bool sawHeader = false;
  bool sawStart = false;

  auto fail = [&](int line, int col, std::string msg) {
    errors.errors.push_back({line, col, std::move(msg)});
  };

  int lineNo = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineNo;

    std::vector<std::string> tok = tokenize(line);
    if (tok.empty()) continue;

    if (!sawHeader) {
      if (tok[0] != "machine" || tok.size() != 2) {
        fail(lineNo, 1, "MissingHeader: expected 'machine <name>'");
        // Keep scanning so later errors are still reported.
      } else {
        desc.name = tok[1];
      }
      sawHeader = true;
      continue;
    }

    const std::string& kw = tok[0];
    auto addSymbols = [&](std::set<Symbol>& alpha) {
      for (size_t i = 1; i < tok.size(); ++i) alpha.insert(tok[i]);
      alpha.insert(core::kBlank);
    };

    if (kw == "input-alphabet") {
      addSymbols(desc.inputAlphabet);
    } else if (kw == "work-alphabet") {
      addSymbols(desc.workAlphabet);
    } else if (kw == "output-alphabet") {
      addSymbols(desc.outputAlphabet);
    } else if (kw == "states") {
      for (size_t i = 1; i < tok.size(); ++i) desc.states.insert(tok[i]);
    } else if (kw == "start") {
      if (tok.size() != 2) {
        fail(lineNo, 1, "expected 'start <state>'");
      } else {
        desc.startState = tok[1];
        sawStart = true;
      }
    } else if (kw == "halt") {
      for (size_t i = 1; i < tok.size(); ++i) desc.haltStates.insert(tok[i]);
    } else if (tok.size() == 9 && tok[4] == "->") {
      TransitionRule rule;
      rule.key.state = tok[0];
      rule.key.readInput = tok[1];
      rule.key.readWork = tok[2];
      rule.key.readOutput = tok[3];
      rule.action.nextState = tok[5];
      rule.action.writeWork = tok[6];
      rule.action.writeOutput = tok[7];
      const std::string& moves = tok[8];
      if (moves.size() != 3) {
        fail(lineNo, 1, "moves must be three of L/R/S, got '" + moves + "'");
        continue;
      }
      auto mi = core::move_from_char(moves[0]);
      auto mw = core::move_from_char(moves[1]);
      auto mo = core::move_from_char(moves[2]);
      if (!mi || !mw || !mo) {
        fail(lineNo, 1, "moves must be three of L/R/S, got '" + moves + "'");
        continue;
      }
      rule.action.moveInput = *mi;
      rule.action.moveWork = *mw;
      rule.action.moveOutput = *mo;
      desc.rules.push_back(std::move(rule));
    } else {
      fail(lineNo, 1, "unrecognized line starting with '" + kw + "'");
    }
  }

  if (!sawHeader) {
    fail(1, 1, "MissingHeader: empty description");
  }
  if (sawHeader && errors.errors.empty() && !sawStart) {
    fail(lineNo, 1, "missing 'start' line");
  }
  if (!errors.errors.empty()) return errors;

  // Alphabets always contain blank, even when a section was omitted.
  desc.inputAlphabet.insert(core::kBlank);
  desc.workAlphabet.insert(core::kBlank);
  desc.outputAlphabet.insert(core::kBlank);

  core::ValidationReport report = core::validate(desc);
  if (!report.ok()) return ValidationErrors{std::move(report)};
  return desc;
}

std::string print_canonical(const MachineDescription& desc) {
  std::ostringstream out;
  out << "machine " << desc.name << "\n";

  auto alphabetLine = [&](const char* label, const std::set<Symbol>& alpha) {
    out << label;
    std::set<Symbol> all = alpha;
    all.insert(core::kBlank);
    for (const Symbol& s : all) out << ' ' << s;
    out << "\n";
  };
  alphabetLine("input-alphabet", desc.inputAlphabet);
  alphabetLine("work-alphabet", desc.workAlphabet);
  alphabetLine("output-alphabet", desc.outputAlphabet);

  out << "states";
  for (const auto& s : desc.states) out << ' ' << s;
  out << "\n";
  out << "start " << desc.startState << "\n";
  out << "halt";
  for (const auto& s : desc.haltStates) out << ' ' << s;
  out << "\n";

  std::map<RuleKey, RuleAction> sorted;
  for (const TransitionRule& r : desc.rules) sorted[r.key] = r.action;
  for (const auto& [key, action] : sorted) {
    out << key.state << ' ' << key.readInput << ' ' << key.readWork << ' ' << key.readOutput
        << " -> " << action.nextState << ' ' << action.writeWork << ' ' << action.writeOutput
        << ' ' << core::move_char(action.moveInput) << core::move_char(action.moveWork)
        << core::move_char(action.moveOutput) << "\n";
  }
  return out.str();
}

BitString encode(const MachineDescription& desc) {
  std::string text = print_canonical(desc);
  BitString bits;
  bits.reserve(text.size() * 8);
  for (unsigned char byte : text) {
    for (int b = 7; b >= 0; --b) bits.push_back((byte >> b) & 1);
  }
  return bits;
}

MachineDescription decode(const BitString& bits) {
  if (bits.empty() || bits.size() % 8 != 0) return d_loop();
  std::string text;
  text.reserve(bits.size() / 8);
  for (size_t i = 0; i < bits.size(); i += 8) {
    unsigned char byte = 0;
    for (int b = 0; b < 8; ++b) byte = static_cast<unsigned char>((byte << 1) | (bits[i + b] & 1));
    text += static_cast<char>(byte);
  }
  ParseResult parsed = parse_description(text);
  if (auto* desc = std::get_if<MachineDescription>(&parsed)) return std::move(*desc);
  return d_loop();
}

MachineDescription d_loop() {
  MachineDescription d;
  d.name = "d-loop";
  d.inputAlphabet = {"0", "1", core::kBlank};
  d.workAlphabet = {core::kBlank};
  d.outputAlphabet = {core::kBlank};
  d.states = {"spin"};
  d.startState = "spin";
  for (const Symbol& in : d.inputAlphabet) {
    TransitionRule r;
    r.key = {"spin", in, core::kBlank, core::kBlank};
    r.action = {"spin", core::kBlank, core::kBlank, Move::Stay, Move::Right, Move::Stay};
    d.rules.push_back(std::move(r));
  }
  return d;
}

bool is_d_loop(const MachineDescription& desc) {
  static const std::string canon = print_canonical(d_loop());
  return print_canonical(desc) == canon;
}

}  // namespace zenosim::codec
