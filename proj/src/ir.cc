#include "squirrelkit/ir.h"

#include <atomic>
#include <deque>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace squirrelkit {
namespace {

std::atomic<std::uint64_t> g_next_id{1};

IrPtr combine(NodeKind type, IrPtr left, IrPtr right, std::string prefix, std::string mid, std::string suffix) {
  auto node = make_ir(type);
  node->left = std::move(left);
  node->right = std::move(right);
  node->op_prefix = std::move(prefix);
  node->op_mid = std::move(mid);
  node->op_suffix = std::move(suffix);
  return node;
}

void render_into(const IrNode& node, std::string& out) {
  if (node.data_value) {
    append_fragment(out, *node.data_value);
    return;
  }
  append_fragment(out, node.op_prefix);
  if (node.left) render_into(*node.left, out);
  append_fragment(out, node.op_mid);
  if (node.right) render_into(*node.right, out);
  append_fragment(out, node.op_suffix);
}

std::string dq(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

nlohmann::json to_json(const IrNode& node) {
  nlohmann::json j;
  j["type"] = kind_name(node.ir_type);
  if (node.data_value) {
    j["d"] = *node.data_value;
    if (node.data_type) j["t"] = node.data_type->name();
    return j;
  }
  if (!node.op_prefix.empty()) j["p"] = node.op_prefix;
  if (!node.op_mid.empty()) j["m"] = node.op_mid;
  if (!node.op_suffix.empty()) j["s"] = node.op_suffix;
  if (node.left) j["l"] = to_json(*node.left);
  if (node.right) j["r"] = to_json(*node.right);
  return j;
}

IrPtr from_json(const nlohmann::json& j) {
  auto type = kind_from_name(j.at("type").get<std::string>());
  if (!type) throw std::invalid_argument("unknown IR type " + j.at("type").get<std::string>());
  auto node = make_ir(*type);
  if (j.contains("d")) {
    node->data_value = j["d"].get<std::string>();
    if (j.contains("t")) {
      auto t = data_type_from_name(j["t"].get<std::string>());
      if (!t) throw std::invalid_argument("unknown data type " + j["t"].get<std::string>());
      node->data_type = t;
    }
    return node;
  }
  node->op_prefix = j.value("p", "");
  node->op_mid = j.value("m", "");
  node->op_suffix = j.value("s", "");
  if (j.contains("l")) node->left = from_json(j["l"]);
  if (j.contains("r")) node->right = from_json(j["r"]);
  return node;
}

}  // namespace

IrPtr make_ir(NodeKind type) {
  auto node = std::make_unique<IrNode>();
  node->ir_type = type;
  node->node_id = g_next_id.fetch_add(1, std::memory_order_relaxed);
  return node;
}

IrPtr make_data_ir(NodeKind type, std::string value, DataType data_type) {
  auto node = make_ir(type);
  node->data_value = std::move(value);
  node->data_type = data_type;
  return node;
}

IrPtr ast_to_ir(const AstNode& node) {
  if (node.is_data_leaf()) {
    auto leaf = make_ir(node.kind);
    leaf->data_value = node.token_text;
    leaf->data_type = node.data_type;
    return leaf;
  }
  const auto& kw = node.keywords;
  const std::size_t n = node.children.size();
  std::vector<IrPtr> kids;
  kids.reserve(n);
  for (const auto& child : node.children) kids.push_back(child ? ast_to_ir(*child) : nullptr);

  if (n == 0) return combine(node.kind, nullptr, nullptr, kw[0], "", "");
  if (n == 1) return combine(node.kind, std::move(kids[0]), nullptr, kw[0], "", kw[1]);
  if (n == 2) return combine(node.kind, std::move(kids[0]), std::move(kids[1]), kw[0], kw[1], kw[2]);

  // Pop two from the head, the first popped becomes the left operand; push the
  // result back to the head until one node remains.
  std::deque<IrPtr> queue;
  for (auto& k : kids) queue.push_back(std::move(k));
  std::size_t next_kw = 1;
  for (;;) {
    IrPtr left = std::move(queue.front());
    queue.pop_front();
    IrPtr right = std::move(queue.front());
    queue.pop_front();
    const bool last = queue.empty();
    std::string prefix = next_kw == 1 ? kw[0] : "";
    auto combined = combine(last ? node.kind : NodeKind::kUnknown, std::move(left), std::move(right),
                            std::move(prefix), kw[next_kw], last ? kw[n] : "");
    ++next_kw;
    if (last) return combined;
    queue.push_front(std::move(combined));
  }
}

IrProgram ast_to_ir(const AstProgram& program) {
  IrProgram out;
  for (const auto& stmt : program.statements) out.statements.push_back(ast_to_ir(*stmt));
  return out;
}

std::string ir_to_sql(const IrNode& node) {
  std::string out;
  render_into(node, out);
  return out;
}

std::string ir_to_sql(const IrProgram& program) {
  std::string out;
  for (std::size_t i = 0; i < program.statements.size(); ++i) {
    render_into(*program.statements[i], out);
    out += ';';
  }
  return out;
}

std::variant<IrProgram, SyntaxError> sql_to_ir(std::string_view sql) {
  auto parsed = parse(sql);
  if (auto* err = std::get_if<SyntaxError>(&parsed)) return *err;
  auto& ast = std::get<AstProgram>(parsed);
  annotate(ast);
  return ast_to_ir(ast);
}

IrPtr deep_copy(const IrNode& node) {
  auto copy = make_ir(node.ir_type);
  copy->op_prefix = node.op_prefix;
  copy->op_mid = node.op_mid;
  copy->op_suffix = node.op_suffix;
  copy->data_value = node.data_value;
  copy->data_type = node.data_type;
  if (node.left) copy->left = deep_copy(*node.left);
  if (node.right) copy->right = deep_copy(*node.right);
  return copy;
}

IrProgram deep_copy(const IrProgram& program) {
  IrProgram out;
  for (const auto& stmt : program.statements) out.statements.push_back(deep_copy(*stmt));
  return out;
}

bool structural_equal(const IrNode* a, const IrNode* b) {
  if (!a || !b) return a == b;
  return a->ir_type == b->ir_type && a->op_prefix == b->op_prefix && a->op_mid == b->op_mid &&
         a->op_suffix == b->op_suffix && a->data_value == b->data_value && a->data_type == b->data_type &&
         structural_equal(a->left.get(), b->left.get()) && structural_equal(a->right.get(), b->right.get());
}

bool structural_equal(const IrProgram& a, const IrProgram& b) {
  if (a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i)
    if (!structural_equal(a.statements[i].get(), b.statements[i].get())) return false;
  return true;
}

std::size_t node_count(const IrNode& node) {
  std::size_t n = 0;
  for_each_preorder(node, [&](const IrNode&) { ++n; });
  return n;
}

std::size_t node_count(const IrProgram& program) {
  std::size_t n = 0;
  for (const auto& stmt : program.statements) n += node_count(*stmt);
  return n;
}

std::string dump_ir(const IrProgram& program) {
  std::string out;
  std::size_t counter = 0;
  for (const auto& stmt : program.statements) {
    std::map<const IrNode*, std::size_t> ids;
    for_each_postorder(*stmt, [&](const IrNode& n) {
      ids[&n] = ++counter;
      auto ref = [&](const IrPtr& p) { return p ? "V" + std::to_string(ids.at(p.get())) : std::string("0"); };
      std::string ops;
      auto add_op = [&](std::string_view label, const std::string& v) {
        if (v.empty()) return;
        if (!ops.empty()) ops += ", ";
        ops += "op." + std::string(label) + "=" + dq(v);
      };
      add_op("prefix", n.op_prefix);
      add_op("mid", n.op_mid);
      add_op("suffix", n.op_suffix);
      if (ops.empty()) ops = "op=0";
      out += "V" + std::to_string(counter) + " = (" + std::string(kind_name(n.ir_type)) + ", l=" + ref(n.left) +
             ", r=" + ref(n.right) + ", " + ops + ", d=" + (n.data_value ? dq(*n.data_value) : "0");
      if (n.data_type) {
        out += ", t=" + std::string(n.data_type->kind_name()) + ", s=" + std::string(n.data_type->name());
      }
      out += ");\n";
    });
  }
  return out;
}

std::string serialize_ir(const IrNode& node) { return to_json(node).dump(); }

IrPtr deserialize_ir(std::string_view text) { return from_json(nlohmann::json::parse(text)); }

}  // namespace squirrelkit
