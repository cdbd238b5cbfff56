#include "upnplab/security/abac.hpp"

namespace upnplab {

std::string_view cond_op_name(CondOp op) {
  switch (op) {
    case CondOp::Eq:
      return "eq";
    case CondOp::Ne:
      return "ne";
    case CondOp::In:
      return "in";
  }
  return "?";
}

Expected<CondOp> cond_op_from_string(std::string_view name) {
  if (name == "eq") return CondOp::Eq;
  if (name == "ne") return CondOp::Ne;
  if (name == "in") return CondOp::In;
  return make_error(Errc::MalformedDocument, "op " + std::string(name));
}

namespace {

// Resolves "hw.<key>" / "sw.<key>" against the document's attribute maps.
// Outer optional: path malformed; inner optional: attribute absent.
Expected<std::optional<std::string>> lookup_attr(const SpecificationDocument& doc,
                                                 const std::string& attr_path) {
  std::size_t dot = attr_path.find('.');
  if (dot == std::string::npos || dot + 1 >= attr_path.size()) {
    return make_error(Errc::BadAttrPath, attr_path);
  }
  std::string_view prefix = std::string_view(attr_path).substr(0, dot);
  std::string key = attr_path.substr(dot + 1);
  const std::map<std::string, std::string>* attrs = nullptr;
  if (prefix == "hw") {
    attrs = &doc.hardware_attrs;
  } else if (prefix == "sw") {
    attrs = &doc.software_attrs;
  } else {
    return make_error(Errc::BadAttrPath, attr_path);
  }
  auto it = attrs->find(key);
  if (it == attrs->end()) return std::optional<std::string>{};
  return std::optional<std::string>{it->second};
}

Expected<bool> condition_holds(const Condition& cond,
                               const SpecificationDocument& doc) {
  auto attr = lookup_attr(doc, cond.attr_path);
  if (!attr.ok()) return attr.error();
  if (!attr.value().has_value()) {
    // Absent attributes satisfy nothing: a document that does not state an
    // attribute cannot pass a test about it.
    return false;
  }
  const std::string& actual = *attr.value();
  switch (cond.op) {
    case CondOp::Eq:
      return actual == cond.value;
    case CondOp::Ne:
      return actual != cond.value;
    case CondOp::In: {
      // Comma-separated alternatives, exact match, no trimming.
      std::size_t start = 0;
      while (start <= cond.value.size()) {
        std::size_t comma = cond.value.find(',', start);
        std::string_view alt =
            (comma == std::string::npos)
                ? std::string_view(cond.value).substr(start)
                : std::string_view(cond.value).substr(start, comma - start);
        if (actual == alt) return true;
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      return false;
    }
  }
  return false;
}

}  // namespace

Expected<PermissionSet> abac_evaluate(const AbacPolicy& policy,
                                      const SpecificationDocument& doc,
                                      const PermissionSet& requested) {
  PermissionSet grantable;
  for (const Rule& rule : policy.rules) {
    bool all_hold = true;
    for (const Condition& cond : rule.conditions) {
      auto holds = condition_holds(cond, doc);
      if (!holds.ok()) return holds.error();
      if (!holds.value()) {
        all_hold = false;
        break;
      }
    }
    if (all_hold) {
      grantable.insert(rule.grants.begin(), rule.grants.end());
    }
  }
  PermissionSet granted;
  for (const Permission& p : requested) {
    if (grantable.count(p)) granted.insert(p);
  }
  return granted;
}

Expected<AbacPolicy> policy_from_tree(const DocTree& tree) {
  AbacPolicy policy;
  if (!tree.is_object()) {
    return make_error(Errc::MalformedDocument, "policy root");
  }
  if (tree.empty()) return policy;  // empty policy: default deny everything
  if (tree.size() != 1 || !tree.contains("rules") || !tree["rules"].is_array()) {
    return make_error(Errc::MalformedDocument, "policy root");
  }
  for (const DocTree& rule_node : tree["rules"]) {
    Rule rule;
    if (!rule_node.is_object() || !rule_node.contains("grants")) {
      return make_error(Errc::MalformedDocument, "rule");
    }
    for (auto it = rule_node.begin(); it != rule_node.end(); ++it) {
      if (it.key() != "grants" && it.key() != "conditions") {
        return make_error(Errc::MalformedDocument, "rule field " + it.key());
      }
    }
    if (rule_node.contains("conditions")) {
      const DocTree& conds = rule_node["conditions"];
      if (!conds.is_array()) {
        return make_error(Errc::MalformedDocument, "conditions");
      }
      for (const DocTree& cond_node : conds) {
        auto attr = doc_get_string(cond_node, {"attr"});
        auto op_str = doc_get_string(cond_node, {"op"});
        auto value = doc_get_string(cond_node, {"value"});
        if (!attr || !op_str || !value || cond_node.size() != 3) {
          return make_error(Errc::MalformedDocument, "condition");
        }
        auto op = cond_op_from_string(*op_str);
        if (!op.ok()) return op.error();
        rule.conditions.push_back(Condition{*attr, op.value(), *value});
      }
    }
    const DocTree& grants = rule_node["grants"];
    if (!grants.is_array() || grants.empty()) {
      return make_error(Errc::MalformedDocument, "grants");
    }
    for (const DocTree& grant_node : grants) {
      auto verb_str = doc_get_string(grant_node, {"verb"});
      auto target = doc_get_string(grant_node, {"target"});
      if (!verb_str || !target || grant_node.size() != 2) {
        return make_error(Errc::MalformedDocument, "grant");
      }
      auto verb = verb_from_string(*verb_str);
      if (!verb.ok()) return verb.error();
      Permission p{verb.value(), *target};
      if (Status st = validate_permission(p)) return *st;
      rule.grants.insert(std::move(p));
    }
    policy.rules.push_back(std::move(rule));
  }
  return policy;
}

Expected<DocTree> policy_to_tree(const AbacPolicy& policy) {
  DocTree tree = DocTree::object();
  if (policy.rules.empty()) return tree;
  DocTree rules = DocTree::array();
  for (const Rule& rule : policy.rules) {
    DocTree rule_node = DocTree::object();
    if (!rule.conditions.empty()) {
      DocTree conds = DocTree::array();
      for (const Condition& cond : rule.conditions) {
        DocTree cond_node = DocTree::object();
        cond_node["attr"] = cond.attr_path;
        cond_node["op"] = std::string(cond_op_name(cond.op));
        cond_node["value"] = cond.value;
        conds.push_back(std::move(cond_node));
      }
      rule_node["conditions"] = std::move(conds);
    }
    if (rule.grants.empty()) {
      return make_error(Errc::MalformedDocument, "rule without grants");
    }
    DocTree grants = DocTree::array();
    for (const Permission& p : rule.grants) {
      DocTree grant_node = DocTree::object();
      grant_node["verb"] = std::string(verb_name(p.verb));
      grant_node["target"] = p.target;
      grants.push_back(std::move(grant_node));
    }
    rule_node["grants"] = std::move(grants);
    rules.push_back(std::move(rule_node));
  }
  tree["rules"] = std::move(rules);
  return tree;
}

Expected<AbacPolicy> decode_policy(const Bytes& raw) {
  auto tree = decode_canonical(raw);
  if (!tree.ok()) return tree.error();
  return policy_from_tree(tree.value());
}

}  // namespace upnplab
