#include "upnplab/security/credentials.hpp"

namespace upnplab {

std::string_view verb_name(Verb verb) {
  switch (verb) {
    case Verb::Advertise:
      return "ADVERTISE";
    case Verb::Discover:
      return "DISCOVER";
    case Verb::Invoke:
      return "INVOKE";
    case Verb::Subscribe:
      return "SUBSCRIBE";
  }
  return "?";
}

Expected<Verb> verb_from_string(std::string_view name) {
  if (name == "ADVERTISE") return Verb::Advertise;
  if (name == "DISCOVER") return Verb::Discover;
  if (name == "INVOKE") return Verb::Invoke;
  if (name == "SUBSCRIBE") return Verb::Subscribe;
  return make_error(Errc::MalformedDocument, "verb " + std::string(name));
}

Status validate_permission(const Permission& p) {
  if (p.target.empty()) {
    return make_error(Errc::InvariantViolation, "empty permission target");
  }
  if (p.target == "*" && p.verb != Verb::Discover) {
    return make_error(Errc::InvariantViolation,
                      "wildcard target restricted to DISCOVER");
  }
  return ok_status();
}

namespace {

DocTree attrs_to_tree(const std::map<std::string, std::string>& attrs) {
  DocTree node = DocTree::object();
  for (const auto& [k, v] : attrs) node[k] = v;
  return node;
}

Expected<std::map<std::string, std::string>> attrs_from_tree(const DocTree& node,
                                                             const char* which) {
  if (!node.is_object() || node.empty()) {
    return make_error(Errc::MalformedDocument, which);
  }
  std::map<std::string, std::string> attrs;
  for (auto it = node.begin(); it != node.end(); ++it) {
    if (!it.value().is_string()) {
      return make_error(Errc::MalformedDocument, which);
    }
    attrs[it.key()] = it.value().get<std::string>();
  }
  return attrs;
}

DocTree spec_doc_content_tree(const SpecificationDocument& doc) {
  DocTree tree = DocTree::object();
  tree["subject_id"] = doc.subject_id;
  tree["subject_public_key"] = hex_encode(doc.subject_public_key);
  tree["hardware_attrs"] = attrs_to_tree(doc.hardware_attrs);
  tree["software_attrs"] = attrs_to_tree(doc.software_attrs);
  return tree;
}

Expected<Tick> tick_from_tree(const DocTree& tree, const char* key) {
  auto it = tree.find(key);
  if (it == tree.end() || !it->is_string()) {
    return make_error(Errc::MalformedDocument, key);
  }
  auto n = parse_uint(it->get<std::string>());
  if (!n.ok()) {
    return make_error(Errc::MalformedDocument, key);
  }
  return static_cast<Tick>(n.value());
}

Expected<Bytes> hex_field(const DocTree& tree, const char* key) {
  auto it = tree.find(key);
  if (it == tree.end() || !it->is_string()) {
    return make_error(Errc::MalformedDocument, key);
  }
  auto raw = hex_decode(it->get<std::string>());
  if (!raw.ok()) {
    return make_error(Errc::MalformedDocument, key);
  }
  return raw.value();
}

Status expect_exact_keys(const DocTree& tree,
                         std::initializer_list<const char*> keys) {
  if (!tree.is_object() || tree.size() != keys.size()) {
    return make_error(Errc::MalformedDocument, "unexpected field set");
  }
  for (const char* key : keys) {
    if (!tree.contains(key)) {
      return make_error(Errc::MalformedDocument, key);
    }
  }
  return ok_status();
}

}  // namespace

Bytes spec_doc_owner_signing_bytes(const SpecificationDocument& doc) {
  auto bytes = encode_canonical(spec_doc_content_tree(doc));
  // An unencodable document (empty attrs, bad attribute key) yields empty
  // signing bytes, which no honest signature matches.
  return bytes.ok() ? bytes.value() : Bytes{};
}

Bytes spec_doc_ca_signing_bytes(const SpecificationDocument& doc) {
  DocTree tree = spec_doc_content_tree(doc);
  tree["owner_signature"] = hex_encode(doc.owner_signature);
  auto bytes = encode_canonical(tree);
  return bytes.ok() ? bytes.value() : Bytes{};
}

Expected<Bytes> encode_spec_doc(const SpecificationDocument& doc) {
  DocTree tree = spec_doc_content_tree(doc);
  tree["owner_signature"] = hex_encode(doc.owner_signature);
  tree["ca_signature"] = hex_encode(doc.ca_signature);
  return encode_canonical(tree);
}

Expected<SpecificationDocument> decode_spec_doc(const Bytes& raw) {
  auto tree = decode_canonical(raw);
  if (!tree.ok()) return tree.error();
  const DocTree& t = tree.value();
  if (Status st = expect_exact_keys(
          t, {"ca_signature", "hardware_attrs", "owner_signature",
              "software_attrs", "subject_id", "subject_public_key"})) {
    return *st;
  }
  SpecificationDocument doc;
  auto subject = doc_get_string(t, {"subject_id"});
  if (!subject) return make_error(Errc::MalformedDocument, "subject_id");
  doc.subject_id = *subject;

  auto pk = hex_field(t, "subject_public_key");
  if (!pk.ok()) return pk.error();
  doc.subject_public_key = pk.value();

  auto hw = attrs_from_tree(t["hardware_attrs"], "hardware_attrs");
  if (!hw.ok()) return hw.error();
  doc.hardware_attrs = hw.value();

  auto sw = attrs_from_tree(t["software_attrs"], "software_attrs");
  if (!sw.ok()) return sw.error();
  doc.software_attrs = sw.value();

  auto owner_sig = hex_field(t, "owner_signature");
  if (!owner_sig.ok()) return owner_sig.error();
  doc.owner_signature = owner_sig.value();

  auto ca_sig = hex_field(t, "ca_signature");
  if (!ca_sig.ok()) return ca_sig.error();
  doc.ca_signature = ca_sig.value();
  return doc;
}

namespace {

DocTree cap_token_content_tree(const CapToken& token) {
  DocTree tree = DocTree::object();
  tree["subject_id"] = token.subject_id;
  tree["subject_public_key"] = hex_encode(token.subject_public_key);
  tree["issued_at"] = std::to_string(token.issued_at);
  tree["expires_at"] = std::to_string(token.expires_at);
  DocTree perms = DocTree::array();
  for (const Permission& p : token.permissions) {
    DocTree entry = DocTree::object();
    entry["verb"] = std::string(verb_name(p.verb));
    entry["target"] = p.target;
    perms.push_back(std::move(entry));
  }
  tree["permissions"] = std::move(perms);
  return tree;
}

}  // namespace

Bytes cap_token_signing_bytes(const CapToken& token) {
  auto bytes = encode_canonical(cap_token_content_tree(token));
  return bytes.ok() ? bytes.value() : Bytes{};
}

Expected<Bytes> encode_cap_token(const CapToken& token) {
  DocTree tree = cap_token_content_tree(token);
  tree["ra_signature"] = hex_encode(token.ra_signature);
  return encode_canonical(tree);
}

Expected<CapToken> decode_cap_token(const Bytes& raw) {
  auto tree = decode_canonical(raw);
  if (!tree.ok()) return tree.error();
  const DocTree& t = tree.value();
  if (Status st = expect_exact_keys(
          t, {"expires_at", "issued_at", "permissions", "ra_signature",
              "subject_id", "subject_public_key"})) {
    return *st;
  }
  CapToken token;
  auto subject = doc_get_string(t, {"subject_id"});
  if (!subject) return make_error(Errc::MalformedDocument, "subject_id");
  token.subject_id = *subject;

  auto pk = hex_field(t, "subject_public_key");
  if (!pk.ok()) return pk.error();
  token.subject_public_key = pk.value();

  auto issued = tick_from_tree(t, "issued_at");
  if (!issued.ok()) return issued.error();
  token.issued_at = issued.value();

  auto expires = tick_from_tree(t, "expires_at");
  if (!expires.ok()) return expires.error();
  token.expires_at = expires.value();

  const DocTree& perms = t["permissions"];
  if (!perms.is_array() || perms.empty()) {
    return make_error(Errc::MalformedDocument, "permissions");
  }
  for (const DocTree& entry : perms) {
    if (Status st = expect_exact_keys(entry, {"target", "verb"})) {
      return *st;
    }
    auto verb_str = doc_get_string(entry, {"verb"});
    auto target = doc_get_string(entry, {"target"});
    if (!verb_str || !target) {
      return make_error(Errc::MalformedDocument, "permissions");
    }
    auto verb = verb_from_string(*verb_str);
    if (!verb.ok()) return verb.error();
    Permission p{verb.value(), *target};
    if (Status st = validate_permission(p)) {
      return make_error(Errc::MalformedDocument, st->detail);
    }
    token.permissions.insert(std::move(p));
  }

  auto sig = hex_field(t, "ra_signature");
  if (!sig.ok()) return sig.error();
  token.ra_signature = sig.value();
  return token;
}

}  // namespace upnplab
