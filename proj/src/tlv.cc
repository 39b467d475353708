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

#include "relaysim/tlv.h"

#include <cctype>

namespace relaysim {

namespace {

constexpr size_t kMaxTagBytes = 3;
constexpr size_t kMaxLength = 0xFFFF;

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  bool AtEnd() const { return pos_ == data_.size(); }
  size_t remaining() const { return data_.size() - pos_; }

  uint8_t Next(const char* what) {
    if (AtEnd()) throw TlvError(std::string("truncated ") + what);
    return data_[pos_++];
  }

  ByteView Take(size_t n) {
    if (n > remaining()) {
      throw TlvError("value length " + std::to_string(n) + " exceeds " +
                     std::to_string(remaining()) + " remaining bytes");
    }
    ByteView out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  ByteView data_;
  size_t pos_ = 0;
};

Tag ReadTag(Reader& in) {
  Tag tag{in.Next("tag")};
  if ((tag[0] & 0x1F) == 0x1F) {
    uint8_t b;
    do {
      b = in.Next("multi-byte tag");
      tag.push_back(b);
      if (tag.size() > kMaxTagBytes) throw TlvError("tag longer than 3 bytes");
    } while (b & 0x80);
  }
  return tag;
}

size_t ReadLength(Reader& in) {
  const uint8_t first = in.Next("length");
  if (first < 0x80) return first;
  if (first == 0x80) throw TlvError("indefinite length not supported");
  const size_t count = first & 0x7F;
  if (count > 2) throw TlvError("length field overflow");
  size_t len = 0;
  for (size_t i = 0; i < count; ++i) len = (len << 8) | in.Next("length");
  const bool minimal = count == 1 ? len >= 0x80 : len > 0xFF;
  if (!minimal) throw TlvError("non-minimal length encoding");
  return len;
}

void AppendLength(Bytes& out, size_t len) {
  if (len > kMaxLength) {
    throw TlvError("value of " + std::to_string(len) + " bytes too large");
  }
  if (len < 0x80) {
    out.push_back(static_cast<uint8_t>(len));
  } else if (len <= 0xFF) {
    out.push_back(0x81);
    out.push_back(static_cast<uint8_t>(len));
  } else {
    out.push_back(0x82);
    out.push_back(static_cast<uint8_t>(len >> 8));
    out.push_back(static_cast<uint8_t>(len & 0xFF));
  }
}

void AppendNode(Bytes& out, const TlvNode& node) {
  if (node.tag.empty() || node.tag.size() > kMaxTagBytes) {
    throw TlvError("tag must be 1 to 3 bytes");
  }
  if (TagIsConstructed(node.tag) != node.IsConstructed()) {
    throw TlvError("constructed bit of tag " + ToHex(node.tag) +
                   " disagrees with value kind");
  }
  out.insert(out.end(), node.tag.begin(), node.tag.end());
  if (node.IsConstructed()) {
    Bytes inner;
    for (const auto& child : node.children()) AppendNode(inner, child);
    AppendLength(out, inner.size());
    out.insert(out.end(), inner.begin(), inner.end());
  } else {
    AppendLength(out, node.bytes().size());
    out.insert(out.end(), node.bytes().begin(), node.bytes().end());
  }
}

const TlvNode* FindIn(const std::vector<TlvNode>& level,
                      const std::vector<Tag>& path, size_t depth) {
  for (const auto& node : level) {
    if (node.tag != path[depth]) continue;
    if (depth + 1 == path.size()) return &node;
    if (!node.IsConstructed()) continue;
    if (const TlvNode* hit = FindIn(node.children(), path, depth + 1)) {
      return hit;
    }
  }
  return nullptr;
}

void Dump(std::string& out, const std::vector<TlvNode>& nodes, int indent) {
  for (const auto& node : nodes) {
    out.append(static_cast<size_t>(indent) * 2, ' ');
    out += ToHex(node.tag);
    if (node.IsConstructed()) {
      out += " (" + std::to_string(TlvEncode(node).size()) + " bytes total)\n";
      Dump(out, node.children(), indent + 1);
    } else {
      const Bytes& v = node.bytes();
      out += " [" + std::to_string(v.size()) + "] " + ToHex(v, true);
      bool printable = !v.empty();
      for (uint8_t c : v) printable = printable && std::isprint(c);
      if (printable) out += "  \"" + std::string(v.begin(), v.end()) + "\"";
      out += "\n";
    }
  }
}

std::vector<TlvNode> DecodeLevel(ByteView raw) {
  std::vector<TlvNode> nodes;
  Reader in(raw);
  while (!in.AtEnd()) {
    Tag tag = ReadTag(in);
    const size_t len = ReadLength(in);
    ByteView value = in.Take(len);
    if (TagIsConstructed(tag)) {
      nodes.push_back(TlvNode::Constructed(std::move(tag), DecodeLevel(value)));
    } else {
      nodes.push_back(
          TlvNode::Primitive(std::move(tag), Bytes(value.begin(), value.end())));
    }
  }
  return nodes;
}

}  // namespace

TlvNode TlvNode::Primitive(Tag tag, Bytes bytes) {
  return TlvNode{std::move(tag), std::move(bytes)};
}

TlvNode TlvNode::Constructed(Tag tag, std::vector<TlvNode> children) {
  return TlvNode{std::move(tag), std::move(children)};
}

bool TagIsConstructed(const Tag& tag) {
  return !tag.empty() && (tag[0] & 0x20) != 0;
}

std::vector<TlvNode> TlvDecode(ByteView raw) { return DecodeLevel(raw); }

Bytes TlvEncode(const std::vector<TlvNode>& nodes) {
  Bytes out;
  for (const auto& node : nodes) AppendNode(out, node);
  return out;
}

Bytes TlvEncode(const TlvNode& node) {
  Bytes out;
  AppendNode(out, node);
  return out;
}

const TlvNode* FindNode(const std::vector<TlvNode>& tree,
                        const std::vector<Tag>& path) {
  if (path.empty()) return nullptr;
  return FindIn(tree, path, 0);
}

std::optional<Bytes> FindTag(const std::vector<TlvNode>& tree,
                             const std::vector<Tag>& path) {
  const TlvNode* node = FindNode(tree, path);
  if (node == nullptr) return std::nullopt;
  if (node->IsConstructed()) return TlvEncode(node->children());
  return node->bytes();
}

std::string TlvDump(const std::vector<TlvNode>& nodes) {
  std::string out;
  Dump(out, nodes, 0);
  return out;
}

}  // namespace relaysim
