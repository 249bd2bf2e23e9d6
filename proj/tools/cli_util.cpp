#include "cli_util.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace depnet::cli {

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, end);
}

std::string format_ext(const ExtReal& v) {
  return v.is_infinite() ? "inf" : format_double(v.value());
}

namespace {

int parse_var_name(const std::string& name, const VariableSpace& space) {
  if (name.size() < 2 || (name[0] != 'X' && name[0] != 'x')) {
    throw DomainError("unknown variable name '" + name + "' (expected X<k>)");
  }
  int k = -1;
  const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
  if (ec != std::errc{} || ptr != name.data() + name.size() || k < 0 ||
      k >= space.num_variables()) {
    throw DomainError("unknown variable name '" + name + "'");
  }
  return k;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::vector<ClampEntry> parse_clamp(const std::string& text, const VariableSpace& space) {
  std::vector<ClampEntry> entries;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw DomainError("bad clamp item '" + item + "' (expected X<k>=<value>)");
    }
    const int var = parse_var_name(item.substr(0, eq), space);
    std::int32_t value = -1;
    const std::string vtext = item.substr(eq + 1);
    const auto [ptr, ec] = std::from_chars(vtext.data(), vtext.data() + vtext.size(), value);
    if (ec != std::errc{} || ptr != vtext.data() + vtext.size()) {
      throw DomainError("bad clamp value in '" + item + "'");
    }
    if (value < 0 || value >= space.cardinality(var)) {
      throw DomainError("clamp value out of range in '" + item + "'");
    }
    entries.emplace_back(var, value);
  }
  return entries;
}

std::vector<int> parse_clamp_vars(const std::string& text, const VariableSpace& space) {
  std::vector<int> vars;
  for (const std::string& item : split(text, ',')) {
    vars.push_back(parse_var_name(item, space));
  }
  return vars;
}

void write_manifest(const std::string& primary_output, const RunManifest& manifest) {
  std::ostringstream os;
  os << "{\n  \"tool\": \"depnet\",\n  \"version\": \"" << kVersion << "\",\n";
  os << "  \"command\": \"" << manifest.command << "\",\n  \"argv\": [";
  for (std::size_t i = 0; i < manifest.argv.size(); ++i) {
    os << (i ? ", " : "") << nlohmann::json(manifest.argv[i]).dump();
  }
  os << "],\n  \"inputs\": [";
  for (std::size_t i = 0; i < manifest.inputs.size(); ++i) {
    os << (i ? ", " : "") << nlohmann::json(manifest.inputs[i]).dump();
  }
  os << "],\n  \"outputs\": [";
  for (std::size_t i = 0; i < manifest.outputs.size(); ++i) {
    os << (i ? ", " : "") << nlohmann::json(manifest.outputs[i]).dump();
  }
  os << "],\n  \"wall_clock_sec\": " << format_double(manifest.wall_clock_sec) << "\n}\n";
  write_file_atomic(primary_output + ".manifest.json", os.str());
}

std::vector<std::string> read_manifest_argv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open manifest: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
    return doc.at("argv").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("bad manifest " + path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DomainError("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw DomainError("failed writing: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace depnet::cli
