#include <string>

#include "enrel/circuit.hpp"
#include "json.hpp"

namespace enrel {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;
using Code = CircuitError::Code;

[[noreturn]] void malformed(std::optional<std::size_t> gate, const std::string& what) {
  throw CircuitError(Code::Malformed, gate, what);
}

std::size_t as_index(const json& v, std::optional<std::size_t> gate, const char* field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    malformed(gate, std::string("field '") + field + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

GateKind parse_kind(const json& v, std::size_t gate) {
  if (v.is_string()) {
    try {
      return parse_gate_kind(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      malformed(gate, e.what());
    }
  }
  if (v.is_object() && v.contains("table") && v.at("table").is_string()) {
    try {
      return GateKind::table(v.at("table").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw CircuitError(Code::TruthTableLength, gate, e.what());
    }
  }
  malformed(gate, "'kind' must be a gate name or {\"table\": \"...\"}");
}

ChildRef parse_child(const json& v, std::size_t gate) {
  if (!v.is_object() || v.size() != 1) {
    malformed(gate, "each child must be one of {\"gate\": id}, {\"input\": i}, {\"const\": b}");
  }
  if (v.contains("gate")) return GateRef{as_index(v.at("gate"), gate, "gate")};
  if (v.contains("input")) return InputRef{as_index(v.at("input"), gate, "input")};
  if (v.contains("const")) {
    const auto& b = v.at("const");
    if (b.is_boolean()) return ConstRef{b.get<bool>()};
    if (b.is_number_integer() && (b.get<int>() == 0 || b.get<int>() == 1)) {
      return ConstRef{b.get<int>() == 1};
    }
    malformed(gate, "'const' must be 0 or 1");
  }
  malformed(gate, "unknown child reference");
}

}  // namespace

GateTree parse_circuit(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    malformed(std::nullopt, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) malformed(std::nullopt, "top level must be an object");
  if (!doc.contains("root")) malformed(std::nullopt, "missing 'root'");
  if (!doc.contains("gates") || !doc.at("gates").is_array()) {
    malformed(std::nullopt, "missing 'gates' array");
  }

  std::optional<std::size_t> n_inputs, k_max;
  if (doc.contains("n_inputs")) n_inputs = as_index(doc.at("n_inputs"), std::nullopt, "n_inputs");
  if (doc.contains("k_max")) k_max = as_index(doc.at("k_max"), std::nullopt, "k_max");
  const std::size_t root = as_index(doc.at("root"), std::nullopt, "root");

  std::vector<GateNode> nodes;
  nodes.reserve(doc.at("gates").size());
  for (const json& g : doc.at("gates")) {
    if (!g.is_object() || !g.contains("id")) malformed(std::nullopt, "gate without 'id'");
    GateNode node;
    node.id = as_index(g.at("id"), std::nullopt, "id");
    if (!g.contains("kind")) malformed(node.id, "missing 'kind'");
    node.kind = parse_kind(g.at("kind"), node.id);
    if (!g.contains("children") || !g.at("children").is_array()) {
      malformed(node.id, "missing 'children' array");
    }
    for (const json& c : g.at("children")) node.children.push_back(parse_child(c, node.id));
    nodes.push_back(std::move(node));
  }
  return GateTree::build(std::move(nodes), root, n_inputs, k_max);
}

std::string to_json(const GateTree& tree) {
  ojson gates = ojson::array();
  for (const GateNode& node : tree.gates()) {
    ojson children = ojson::array();
    for (const ChildRef& child : node.children) {
      if (const auto* g = std::get_if<GateRef>(&child)) {
        children.push_back({{"gate", g->id}});
      } else if (const auto* in = std::get_if<InputRef>(&child)) {
        children.push_back({{"input", in->index}});
      } else {
        children.push_back({{"const", std::get<ConstRef>(child).value ? 1 : 0}});
      }
    }
    ojson kind = node.kind.op() == GateKind::Op::Table ? ojson{{"table", node.kind.name()}}
                                                       : ojson(node.kind.name());
    gates.push_back({{"id", node.id}, {"kind", kind}, {"children", children}});
  }
  ojson doc = {{"k_max", tree.k_max()},
               {"n_inputs", tree.n_inputs()},
               {"root", tree.root()},
               {"gates", gates}};
  return doc.dump(2);
}

}  // namespace enrel
