#include "upnplab/wire/canonical.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace upnplab {

namespace {

bool is_valid_key(std::string_view key) {
  if (key.empty() || key[0] == '#') return false;
  for (char c : key) {
    if (c < 0x21 || c > 0x7e) return false;  // printable ASCII, no spaces
    if (c == '/' || c == '=' || c == '\\') return false;
  }
  return true;
}

std::string escape_value(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '=':
        out += "\\=";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\\':
        out += "\\\\";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

Status encode_node(const DocTree& node, const std::string& prefix, Bytes& out) {
  // nlohmann::json objects iterate in key order (std::map), which is exactly
  // the required code-point sort.
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string& key = it.key();
    if (!is_valid_key(key)) {
      return make_error(Errc::BadKey, prefix.empty() ? key : prefix + "/" + key);
    }
    const std::string path = prefix.empty() ? key : prefix + "/" + key;
    const DocTree& value = it.value();
    if (value.is_string()) {
      const std::string& s = value.get_ref<const std::string&>();
      if (!is_valid_utf8(s)) {
        return make_error(Errc::NonUtf8Doc, path);
      }
      out += path;
      out += '=';
      out += escape_value(s);
      out += '\n';
    } else if (value.is_object()) {
      if (value.empty()) {
        return make_error(Errc::EmptyNode, path);
      }
      if (Status st = encode_node(value, path, out)) return st;
    } else if (value.is_array()) {
      if (value.empty()) {
        return make_error(Errc::EmptyNode, path);
      }
      for (std::size_t i = 0; i < value.size(); ++i) {
        const DocTree& elem = value[i];
        const std::string elem_path = path + "/#" + std::to_string(i);
        if (!elem.is_object()) {
          return make_error(Errc::NonScalarLeaf, elem_path);
        }
        if (elem.empty()) {
          return make_error(Errc::EmptyNode, elem_path);
        }
        if (Status st = encode_node(elem, elem_path, out)) return st;
      }
    } else {
      return make_error(Errc::NonScalarLeaf, path);
    }
  }
  return ok_status();
}

Expected<std::string> unescape_value(std::string_view raw, const std::string& path) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c == '\\') {
      if (i + 1 >= raw.size()) {
        return make_error(Errc::BadEscape, path);
      }
      char next = raw[++i];
      if (next == '=') {
        out.push_back('=');
      } else if (next == 'n') {
        out.push_back('\n');
      } else if (next == '\\') {
        out.push_back('\\');
      } else {
        return make_error(Errc::BadEscape, path);
      }
    } else if (c == '=') {
      // A canonical encoder always escapes '=' in values.
      return make_error(Errc::NotCanonical, path);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

struct PathSegment {
  bool is_index = false;
  std::string key;        // when !is_index
  std::size_t index = 0;  // when is_index
};

Expected<std::vector<PathSegment>> split_path(std::string_view path) {
  if (path.empty()) {
    return make_error(Errc::BadKey, "empty path");
  }
  std::vector<PathSegment> segs;
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t slash = path.find('/', start);
    std::string_view part = (slash == std::string_view::npos)
                                ? path.substr(start)
                                : path.substr(start, slash - start);
    PathSegment seg;
    if (!part.empty() && part[0] == '#') {
      auto idx = parse_uint(part.substr(1));
      if (!idx.ok()) {
        return make_error(Errc::BadKey, std::string(path));
      }
      seg.is_index = true;
      seg.index = static_cast<std::size_t>(idx.value());
    } else {
      if (!is_valid_key(part)) {
        return make_error(Errc::BadKey, std::string(path));
      }
      seg.key = std::string(part);
    }
    segs.push_back(std::move(seg));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  // The root is a node, so a path must start with a key; a list index can
  // only follow a key, because lists contain nodes, not other lists.
  if (segs.front().is_index) {
    return make_error(Errc::BadKey, std::string(path));
  }
  for (std::size_t i = 1; i < segs.size(); ++i) {
    if (segs[i].is_index && segs[i - 1].is_index) {
      return make_error(Errc::BadKey, std::string(path));
    }
  }
  return segs;
}

}  // namespace

Expected<Bytes> encode_canonical(const DocTree& doc) {
  if (!doc.is_object()) {
    return make_error(Errc::NonScalarLeaf, "(root)");
  }
  Bytes out;
  if (Status st = encode_node(doc, "", out)) {
    return *st;
  }
  return out;
}

Expected<DocTree> decode_canonical(const Bytes& raw) {
  DocTree root = DocTree::object();
  if (raw.empty()) return root;
  if (!is_valid_utf8(raw)) {
    return make_error(Errc::NonUtf8Doc, "");
  }
  if (raw.back() != '\n') {
    return make_error(Errc::MalformedLine, "missing trailing newline");
  }

  std::size_t pos = 0;
  while (pos < raw.size()) {
    std::size_t eol = raw.find('\n', pos);
    std::string_view line(raw.data() + pos, eol - pos);
    pos = eol + 1;

    // Keys cannot contain '=' or '\', so the first '=' separates the path.
    std::size_t sep = line.find('=');
    if (sep == std::string_view::npos) {
      return make_error(Errc::MalformedLine, std::string(line));
    }
    const std::string path(line.substr(0, sep));
    auto segs = split_path(path);
    if (!segs.ok()) return segs.error();
    auto value = unescape_value(line.substr(sep + 1), path);
    if (!value.ok()) return value.error();

    // Walk / grow the tree along the path.
    DocTree* cur = &root;
    const auto& parts = segs.value();
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const PathSegment& seg = parts[i];
      const bool last = (i + 1 == parts.size());
      if (seg.is_index) {
        if (last) {
          // A list element must be a node, never a bare scalar.
          return make_error(Errc::NonScalarLeaf, path);
        }
        if (!cur->is_array()) {
          return make_error(Errc::DuplicateKey, path);
        }
        if (seg.index > cur->size()) {
          return make_error(Errc::MalformedLine, path + " (list index gap)");
        }
        if (seg.index == cur->size()) {
          cur->push_back(DocTree::object());
        }
        cur = &(*cur)[seg.index];
      } else {
        if (!cur->is_object()) {
          return make_error(Errc::DuplicateKey, path);
        }
        if (last) {
          if (cur->contains(seg.key)) {
            return make_error(Errc::DuplicateKey, path);
          }
          (*cur)[seg.key] = std::move(value.value());
        } else {
          auto it = cur->find(seg.key);
          if (it == cur->end()) {
            (*cur)[seg.key] =
                parts[i + 1].is_index ? DocTree::array() : DocTree::object();
            it = cur->find(seg.key);
          } else if (it->is_string()) {
            return make_error(Errc::DuplicateKey, path);
          }
          cur = &(*it);
        }
      }
    }
  }

  // Strictness gate: accept exactly encode's image. This catches unsorted
  // lines and any other representation drift in one place.
  auto reencoded = encode_canonical(root);
  if (!reencoded.ok()) {
    return reencoded.error();
  }
  if (reencoded.value() != raw) {
    return make_error(Errc::NotCanonical, "line order");
  }
  return root;
}

std::optional<std::string> doc_get_string(
    const DocTree& doc, std::initializer_list<const char*> path) {
  const DocTree* cur = &doc;
  for (const char* key : path) {
    if (!cur->is_object()) return std::nullopt;
    auto it = cur->find(key);
    if (it == cur->end()) return std::nullopt;
    cur = &(*it);
  }
  if (!cur->is_string()) return std::nullopt;
  return cur->get<std::string>();
}

}  // namespace upnplab
