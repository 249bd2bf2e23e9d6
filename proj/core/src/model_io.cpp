#include "depnet/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace depnet {

namespace {

constexpr int kFormatVersion = 1;

void put_double(std::ostream& os, double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  os.write(buf, end - buf);
}

}  // namespace

void write_network_json(std::ostream& os, const DependencyNetwork& network) {
  const VariableSpace& space = network.space();
  os << "{\n  \"format\": \"depnet-model\",\n  \"version\": " << kFormatVersion << ",\n";
  os << "  \"cardinalities\": [";
  for (int i = 0; i < space.num_variables(); ++i) {
    os << (i ? "," : "") << space.cardinality(i);
  }
  os << "],\n  \"weights\": [";
  for (int i = 0; i < network.num_nodes(); ++i) {
    if (i) os << ",";
    put_double(os, network.weights()[i]);
  }
  os << "],\n  \"nodes\": [\n";
  for (int i = 0; i < network.num_nodes(); ++i) {
    const NetworkNode& nd = network.node(i);
    os << "    {\"i\": " << i << ", \"ops\": [";
    const auto& ops = nd.source.ops();
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (k) os << ",";
      if (ops[k].kind == SourceOp::Kind::kSplit) {
        os << "{\"op\":\"split\",\"y\":" << ops[k].a << ",\"j\":" << ops[k].b << "}";
      } else {
        os << "{\"op\":\"merge\",\"y0\":" << ops[k].a << ",\"y1\":" << ops[k].b << "}";
      }
    }
    os << "], \"table\": [";
    for (std::int32_t y = 0; y < nd.table.leaf_count(); ++y) {
      if (y) os << ",";
      os << "[";
      const auto row = nd.table.row(y);
      for (std::size_t v = 0; v < row.size(); ++v) {
        if (v) os << ",";
        put_double(os, row[v]);
      }
      os << "]";
    }
    os << "]}" << (i + 1 < network.num_nodes() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
}

std::string network_to_json(const DependencyNetwork& network) {
  std::ostringstream os;
  write_network_json(os, network);
  return os.str();
}

DependencyNetwork network_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", std::string{}) != "depnet-model") {
      throw ModelError("model file: missing or wrong \"format\" tag");
    }
    if (doc.at("version").get<int>() != kFormatVersion) {
      throw ModelError("model file: unsupported version " + doc.at("version").dump());
    }
    VariableSpace space(doc.at("cardinalities").get<std::vector<std::int32_t>>());
    ScanWeights weights(doc.at("weights").get<std::vector<double>>());

    const auto& node_list = doc.at("nodes");
    if (static_cast<int>(node_list.size()) != space.num_variables()) {
      throw ModelError("model file: node count does not match the cardinalities");
    }
    std::vector<NetworkNode> nodes;
    nodes.reserve(node_list.size());
    for (int i = 0; i < space.num_variables(); ++i) {
      const auto& jn = node_list.at(i);
      if (jn.at("i").get<int>() != i) {
        throw ModelError("model file: nodes must appear in index order");
      }
      std::vector<SourceOp> ops;
      for (const auto& jop : jn.at("ops")) {
        const std::string kind = jop.at("op").get<std::string>();
        if (kind == "split") {
          ops.push_back(SourceOp::split(jop.at("y").get<std::int32_t>(),
                                        jop.at("j").get<std::int32_t>()));
        } else if (kind == "merge") {
          ops.push_back(SourceOp::merge(jop.at("y0").get<std::int32_t>(),
                                        jop.at("y1").get<std::int32_t>()));
        } else {
          throw ModelError("model file: unknown op kind '" + kind + "'");
        }
      }
      InformationSource source(space, i, std::move(ops));

      const auto& jt = jn.at("table");
      std::vector<double> rows;
      rows.reserve(jt.size() * space.cardinality(i));
      for (const auto& jrow : jt) {
        if (static_cast<std::int32_t>(jrow.size()) != space.cardinality(i)) {
          throw ModelError("model file: node " + std::to_string(i) + " has a malformed row");
        }
        for (const auto& v : jrow) rows.push_back(v.get<double>());
      }
      ConditionalTable table(i, space.cardinality(i),
                             static_cast<std::int32_t>(jt.size()), std::move(rows));
      nodes.push_back(NetworkNode{std::move(source), std::move(table)});
    }
    return DependencyNetwork(std::move(space), std::move(nodes), std::move(weights));
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model file: ") + e.what());
  } catch (const DomainError& e) {
    throw ModelError(std::string("model file: ") + e.what());
  }
}

DependencyNetwork read_network_json(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return network_from_json(buf.str());
}

void save_network(const std::string& path, const DependencyNetwork& network) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open model file for writing: " + path);
  write_network_json(out, network);
  if (!out) throw DomainError("failed writing model file: " + path);
}

DependencyNetwork load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open model file: " + path);
  return read_network_json(in);
}

}  // namespace depnet
