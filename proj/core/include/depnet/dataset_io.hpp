#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "depnet/state_space.hpp"

namespace depnet {

/// Dataset CSV: first row variable names; an optional second line
/// `#cardinalities: c0,c1,...` pins cardinalities (otherwise they are
/// inferred as max observed + 1, floored at 2); further `#` lines are
/// free-form comments; remaining rows are integer values.
struct NamedDataset {
  Dataset data;
  std::vector<std::string> names;
};

NamedDataset read_dataset_csv(std::istream& in);
NamedDataset read_dataset_csv_file(const std::string& path);

/// Writes the standard dataset CSV. `comments` are emitted as `#` lines
/// right after the cardinalities line. Empty names default to X0..Xn-1.
void write_dataset_csv(std::ostream& os, const Dataset& data,
                       const std::vector<std::string>& names = {},
                       const std::vector<std::string>& comments = {});

std::vector<std::string> default_names(int n);

}  // namespace depnet
