#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "zenosim/core.hpp"

namespace zenosim::codec {

// Finite 0/1 sequence; the canonical machine encoding usable as input to
// other machines.
using BitString = std::vector<uint8_t>;

std::string bits_to_string(const BitString& bits);
BitString bits_from_string(std::string_view text);

struct ParseError {
  int line = 0;
  int column = 0;
  std::string message;
};

struct ParseErrors {
  std::vector<ParseError> errors;
};

struct ValidationErrors {
  core::ValidationReport report;
};

using ParseResult = std::variant<core::MachineDescription, ParseErrors, ValidationErrors>;

// Line-oriented machine source. Grammar:
//   machine <name>
//   input-alphabet <sym> ...      ('_' is blank and always a member)
//   work-alphabet <sym> ...
//   output-alphabet <sym> ...
//   states <s> ...
//   start <s>
//   halt [<s> ...]
//   <state> <in> <work> <out> -> <state> <writeWork> <writeOut> <mI><mW><mO>
// '#' starts a comment; moves are L, R or S.
ParseResult parse_description(std::string_view text);

// Deterministic source text: alphabets, states and rules in a fixed total
// order. print(parse(print(d))) == print(d).
std::string print_canonical(const core::MachineDescription& desc);

// Bits of the canonical text, most significant bit of each byte first.
// Injective on canonical forms.
BitString encode(const core::MachineDescription& desc);

// Total: a valid encoding yields its machine, everything else yields the
// designated diverger d-loop.
core::MachineDescription decode(const BitString& bits);

// One-state machine that walks its work head right forever and never writes
// the output tape. Target of decode on non-encodings.
core::MachineDescription d_loop();

bool is_d_loop(const core::MachineDescription& desc);

}  // namespace zenosim::codec
