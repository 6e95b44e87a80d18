#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "trajattack/trajectory.hpp"

namespace trajattack {

// One JSON object per line: {"id", "dt", "past": [[x, y], ...], "future": [...]}.
// Optional integer fields "P" and "F" declare the horizons and are checked
// against the arrays.

std::vector<Scenario> read_dataset(std::istream& in);
std::vector<Scenario> read_dataset(const std::filesystem::path& path);

void write_dataset(const std::vector<Scenario>& scenarios, std::ostream& out);
void write_dataset(const std::vector<Scenario>& scenarios, const std::filesystem::path& path);

/// Checks that every scenario shares the same P and F; returns them.
std::pair<std::size_t, std::size_t> uniform_horizons(const std::vector<Scenario>& scenarios);

}  // namespace trajattack
