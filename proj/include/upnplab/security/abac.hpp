// Attribute-based access control: an ordered rule list evaluated against a
// specification document's hardware/software attributes. Default deny — a
// request is granted only where some rule with all conditions satisfied
// grants it.
#pragma once

#include <string>
#include <vector>

#include "upnplab/error.hpp"
#include "upnplab/security/credentials.hpp"

namespace upnplab {

enum class CondOp { Eq, Ne, In };

std::string_view cond_op_name(CondOp op);  // "eq", "ne", "in"
Expected<CondOp> cond_op_from_string(std::string_view name);

// attr_path addresses one attribute: "hw.<key>" for hardware_attrs,
// "sw.<key>" for software_attrs. For In, value lists comma-separated
// alternatives. An absent attribute satisfies no operator (including Ne).
struct Condition {
  std::string attr_path;
  CondOp op = CondOp::Eq;
  std::string value;

  bool operator==(const Condition&) const = default;
};

struct Rule {
  std::vector<Condition> conditions;  // all must hold (empty = always holds)
  PermissionSet grants;

  bool operator==(const Rule&) const = default;
};

struct AbacPolicy {
  std::vector<Rule> rules;

  bool operator==(const AbacPolicy&) const = default;
};

// granted = requested ∩ (union of grants of rules whose conditions all hold).
// Errors: BadAttrPath.
Expected<PermissionSet> abac_evaluate(const AbacPolicy& policy,
                                      const SpecificationDocument& doc,
                                      const PermissionSet& requested);

// Canonical-encoding policy files:
//   rules/#i/conditions/#j/attr=hw.sensor
//   rules/#i/conditions/#j/op=eq|ne|in
//   rules/#i/conditions/#j/value=imaging
//   rules/#i/grants/#k/verb=ADVERTISE
//   rules/#i/grants/#k/target=urn:SecurityCamera
// A rule without conditions omits the conditions list.
Expected<AbacPolicy> policy_from_tree(const DocTree& tree);
Expected<DocTree> policy_to_tree(const AbacPolicy& policy);
Expected<AbacPolicy> decode_policy(const Bytes& raw);

}  // namespace upnplab
