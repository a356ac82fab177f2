#pragma once

#include <string>
#include <vector>

#include "zenosim/core.hpp"

namespace zenosim::gallery {

// Hand-built machines used by the test corpus, the CLI demos and the
// contradiction harness.

core::MachineDescription increment_machine();   // binary successor, MSB first
core::MachineDescription parity_machine();      // parity bit of input length
core::MachineDescription copy_machine();        // input copied to output
core::MachineDescription loop_in_place();
core::MachineDescription right_marcher();       // output head walks right forever
core::MachineDescription flip01();              // cell 1 alternates 0/1
core::MachineDescription flip_blank1();         // cell 1 alternates blank/1
core::MachineDescription write0_park_loop();    // 0 at cell 1, head parked at 2
core::MachineDescription write1_then_loop();
core::MachineDescription boundary_input();
core::MachineDescription boundary_output();
core::MachineDescription missing_rule();
core::MachineDescription immediate_halt();
core::MachineDescription halt_head_far();       // halts with output head at 5
core::MachineDescription two_phase();           // halts one step after a limit stage
core::MachineDescription work_bouncer();
core::MachineDescription constant0_solver();
core::MachineDescription constant1_solver();
core::MachineDescription alternate10_halt();    // writes 1, then 0, halts at head 2
core::MachineDescription work_counter();        // grows the work tape forever

// Scans its input and answers 1 at cell 1 iff the input is shorter than
// maxLen symbols, 0 otherwise; always halts with the head at cell 2.
core::MachineDescription bounded_length_solver(int maxLen);

struct GalleryEntry {
  std::string name;
  std::string summary;
  core::MachineDescription machine;
};

// Every machine above (with a default-sized bounded solver).
const std::vector<GalleryEntry>& all();

const core::MachineDescription* find(const std::string& name);

}  // namespace zenosim::gallery
