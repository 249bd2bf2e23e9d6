#include "depnet/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace depnet {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::int32_t parse_int(const std::string& s, const char* what) {
  std::int32_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError(std::string("dataset CSV: bad ") + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<std::string> default_names(int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i) names.push_back("X" + std::to_string(i));
  return names;
}

NamedDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("dataset CSV: empty input");
  if (!line.empty() && line.front() == '#') {
    throw DomainError("dataset CSV: first row must be the variable names");
  }
  const std::vector<std::string> names = split_csv_line(line);
  const int n = static_cast<int>(names.size());
  if (n == 0) throw DomainError("dataset CSV: no columns");

  std::vector<std::int32_t> pinned;
  std::vector<std::int32_t> values;
  bool saw_data = false;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    if (line.front() == '#') {
      static const std::string kCardTag = "#cardinalities:";
      if (line.rfind(kCardTag, 0) == 0) {
        if (saw_data || !pinned.empty()) {
          throw DomainError("dataset CSV: #cardinalities: must appear once, before the data");
        }
        for (const std::string& f : split_csv_line(line.substr(kCardTag.size()))) {
          pinned.push_back(parse_int(f, "cardinality"));
        }
        if (static_cast<int>(pinned.size()) != n) {
          throw DomainError("dataset CSV: cardinality count does not match the columns");
        }
      }
      continue;  // other comment lines are informational
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != n) {
      throw DomainError("dataset CSV: row " + std::to_string(row) + " has " +
                        std::to_string(fields.size()) + " fields; expected " + std::to_string(n));
    }
    for (const std::string& f : fields) values.push_back(parse_int(f, "value"));
    saw_data = true;
  }
  if (!saw_data) throw DomainError("dataset CSV: no data rows");

  std::vector<std::int32_t> cards;
  if (!pinned.empty()) {
    cards = pinned;
  } else {
    cards.assign(n, 2);  // inference floor; a constant column still has cardinality 2
    for (std::size_t k = 0; k < values.size(); ++k) {
      const int col = static_cast<int>(k % n);
      cards[col] = std::max(cards[col], values[k] + 1);
    }
  }
  return NamedDataset{Dataset(VariableSpace(std::move(cards)), std::move(values)), names};
}

NamedDataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open dataset file: " + path);
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& os, const Dataset& data,
                       const std::vector<std::string>& names,
                       const std::vector<std::string>& comments) {
  const int n = data.space().num_variables();
  const std::vector<std::string> cols = names.empty() ? default_names(n) : names;
  if (static_cast<int>(cols.size()) != n) {
    throw DomainError("write_dataset_csv: name count mismatch");
  }
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  os << "#cardinalities:";
  for (int i = 0; i < n; ++i) os << (i ? "," : " ") << data.space().cardinality(i);
  os << '\n';
  for (const std::string& c : comments) os << '#' << c << '\n';
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto sample = data.sample(k);
    for (int i = 0; i < n; ++i) os << (i ? "," : "") << sample[i];
    os << '\n';
  }
}

}  // namespace depnet
