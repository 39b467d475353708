/*
 * Copyright (C) 2026 The relaysim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "relaysim/hex.h"

namespace relaysim {

class TlvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raw tag bytes as they appear on the wire, e.g. {0x9F, 0x6C}.
using Tag = Bytes;

inline Tag MakeTag(std::string_view hex) { return FromHex(hex); }

// BER-TLV node. The constructed bit (0x20 of the first tag byte) decides
// whether `value` holds raw bytes or children.
struct TlvNode {
  Tag tag;
  std::variant<Bytes, std::vector<TlvNode>> value;

  static TlvNode Primitive(Tag tag, Bytes bytes);
  static TlvNode Constructed(Tag tag, std::vector<TlvNode> children);

  bool IsConstructed() const {
    return std::holds_alternative<std::vector<TlvNode>>(value);
  }
  const Bytes& bytes() const { return std::get<Bytes>(value); }
  const std::vector<TlvNode>& children() const {
    return std::get<std::vector<TlvNode>>(value);
  }

  bool operator==(const TlvNode&) const = default;
};

bool TagIsConstructed(const Tag& tag);

// Decodes a concatenation of definite-length TLV objects. Lengths must use
// the minimal encoding so that re-encoding reproduces the input.
std::vector<TlvNode> TlvDecode(ByteView raw);

Bytes TlvEncode(const std::vector<TlvNode>& nodes);
Bytes TlvEncode(const TlvNode& node);

// Follows `path` one level per tag, taking the first depth-first match.
std::optional<Bytes> FindTag(const std::vector<TlvNode>& tree,
                             const std::vector<Tag>& path);
const TlvNode* FindNode(const std::vector<TlvNode>& tree,
                        const std::vector<Tag>& path);

// Indented tag/length/value listing used by the `decode` subcommand.
std::string TlvDump(const std::vector<TlvNode>& nodes);

}  // namespace relaysim
