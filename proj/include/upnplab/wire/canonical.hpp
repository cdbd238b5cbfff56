// Canonical line-oriented tree encoding. One `path=value` line per scalar
// leaf, LF-terminated, keys sorted by code point within each node, nesting
// expressed as slash-joined key paths and `#i` list indices. The same bytes
// serve as the document wire body, the on-disk file format, and the input to
// every signature in the security layer, so the encoding is strictly
// canonical: decode accepts exactly the byte strings encode can produce.
#pragma once

#include <json.hpp>

#include "upnplab/error.hpp"
#include "upnplab/types.hpp"

namespace upnplab {

// Document tree. Restricted shape, enforced by encode_canonical:
//   - the root is a node (JSON object); an empty root encodes to "";
//   - every value is a scalar string, a non-empty node, or a non-empty
//     ordered list of non-empty nodes;
//   - keys are printable ASCII without '/', '=' or '\', and do not start
//     with '#' (reserved for list indices).
using DocTree = nlohmann::json;

// Deterministic encoding of a valid tree. Scalars escape '=' as "\=",
// LF as "\n" and backslash as "\\"; any other byte is emitted verbatim
// (values must be valid UTF-8).
// Errors: NonScalarLeaf, BadKey, EmptyNode, NonUtf8Doc.
Expected<Bytes> encode_canonical(const DocTree& doc);

// Inverse of encode_canonical. Rejects anything outside encode's image:
// unknown escapes, unsorted or duplicate paths, gaps in list indices, raw
// '=' in a value, a missing final newline.
// Errors: DuplicateKey, NonScalarLeaf, BadEscape, BadKey, MalformedLine,
// NonUtf8Doc, NotCanonical.
Expected<DocTree> decode_canonical(const Bytes& raw);

// Convenience for nested lookups on decoded trees; returns nullopt when any
// path segment is missing or the final value is not a scalar string.
std::optional<std::string> doc_get_string(const DocTree& doc,
                                          std::initializer_list<const char*> path);

}  // namespace upnplab
