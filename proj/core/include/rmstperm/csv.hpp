#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>

#include "rmstperm/observation.hpp"

namespace rmstperm {

/// Two-group dataset as read from CSV. Column order is fixed:
/// time,status,group with a header row. Group labels are arbitrary strings,
/// mapped to groups 1 and 2 by order of first appearance.
struct Dataset {
  std::array<std::string, 2> group_labels;
  Sample group1;
  Sample group2;
};

struct CsvOptions {
  /// Round times to this many decimals on input (deliberate tie creation).
  std::optional<int> round_decimals;
};

Dataset read_dataset(std::istream& in, const CsvOptions& options = {});
Dataset read_dataset_file(const std::string& path,
                          const CsvOptions& options = {});

void write_dataset(const Dataset& dataset, std::ostream& out);

}  // namespace rmstperm
