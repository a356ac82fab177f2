#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <variant>

#include "support/testutil.hpp"
#include "zenosim/codec.hpp"
#include "zenosim/gallery.hpp"

using namespace zenosim;
using codec::BitString;
using core::MachineDescription;

TEST_CASE("canonical text round-trips every gallery machine") {
  for (const auto& entry : gallery::all()) {
    std::string text = codec::print_canonical(entry.machine);
    auto parsed = codec::parse_description(text);
    CAPTURE(entry.name);
    REQUIRE(std::holds_alternative<MachineDescription>(parsed));
    CHECK(codec::print_canonical(std::get<MachineDescription>(parsed)) == text);
  }
}

TEST_CASE("canonical printing is order independent and idempotent") {
  MachineDescription d = gallery::increment_machine();
  MachineDescription shuffled = d;
  std::reverse(shuffled.rules.begin(), shuffled.rules.end());
  CHECK(codec::print_canonical(d) == codec::print_canonical(shuffled));
  auto reparsed = codec::parse_description(codec::print_canonical(d));
  CHECK(codec::print_canonical(std::get<MachineDescription>(reparsed)) ==
        codec::print_canonical(d));
}

TEST_CASE("parse failure modes") {
  SUBCASE("empty file is a missing header") {
    auto r = codec::parse_description("");
    REQUIRE(std::holds_alternative<codec::ParseErrors>(r));
    CHECK(std::get<codec::ParseErrors>(r).errors[0].message.find("MissingHeader") !=
          std::string::npos);
  }
  SUBCASE("duplicate rule keys are a validation error, not a parse error") {
    std::string text = codec::print_canonical(gallery::copy_machine());
    // Append a clashing copy of an existing rule with a different action.
    text += "k 0 _ _ -> done _ 1 SSS\n";
    auto r = codec::parse_description(text);
    REQUIRE(std::holds_alternative<codec::ValidationErrors>(r));
    const auto& report = std::get<codec::ValidationErrors>(r).report;
    bool nondet = false;
    for (const auto& issue : report.issues) {
      if (issue.defect == core::Defect::NondeterminismViolation) nondet = true;
    }
    CHECK(nondet);
  }
  SUBCASE("garbled rule line reports position") {
    auto r = codec::parse_description("machine x\nstates a\nstart a\nhalt\na b ->\n");
    REQUIRE(std::holds_alternative<codec::ParseErrors>(r));
    CHECK(std::get<codec::ParseErrors>(r).errors[0].line == 5);
  }
}

TEST_CASE("parse and print survive 100 random machines") {
  testutil::Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    MachineDescription d = testutil::random_machine(rng);
    std::string text = codec::print_canonical(d);
    auto parsed = codec::parse_description(text);
    REQUIRE(std::holds_alternative<MachineDescription>(parsed));
    CHECK(codec::print_canonical(std::get<MachineDescription>(parsed)) == text);
  }
}

TEST_CASE("encode begins with the bits of the header keyword") {
  BitString bits = codec::encode(gallery::copy_machine());
  BitString expected;
  for (unsigned char byte : std::string("machine ")) {
    for (int b = 7; b >= 0; --b) expected.push_back((byte >> b) & 1);
  }
  REQUIRE(bits.size() >= expected.size());
  CHECK(std::equal(expected.begin(), expected.end(), bits.begin()));
}

TEST_CASE("decode of encode is the canonical identity; encode is injective") {
  testutil::Rng rng(7);
  std::set<std::string> seen;
  for (int i = 0; i < 100; ++i) {
    MachineDescription d = testutil::random_machine(rng);
    BitString bits = codec::encode(d);
    MachineDescription back = codec::decode(bits);
    CHECK(codec::print_canonical(back) == codec::print_canonical(d));
    // Injectivity on canonical forms: every encoding is distinct.
    CHECK(seen.insert(codec::bits_to_string(bits)).second);
  }
}

TEST_CASE("decode is total and lands on d-loop for garbage") {
  CHECK(codec::is_d_loop(codec::decode({})));
  testutil::Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    BitString junk;
    size_t len = rng.below(120);
    for (size_t j = 0; j < len; ++j) junk.push_back(rng.below(2));
    MachineDescription d = codec::decode(junk);
    CHECK(core::validate(d).ok());
  }
}

TEST_CASE("d-loop validates and never writes its output tape") {
  MachineDescription d = codec::d_loop();
  REQUIRE(core::validate(d).ok());
  core::Machine m(d);
  core::Configuration c = m.initial_configuration(core::word_from_chars("0101"));
  for (int i = 0; i < 500; ++i) {
    REQUIRE(m.step(c) == core::StepOutcome::Stepped);
    CHECK(m.first_output_cell(c) == core::kBlank);
  }
  CHECK(c.workHead == 500);
  CHECK(c.outputHead == 1);
}
