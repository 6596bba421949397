#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "evote/group/group.hpp"
#include "evote/hash.hpp"

namespace evote::io {

/// Raised for unreadable, corrupt or mismatched artifact files.
class ArtifactError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Everything a reader needs to check before trusting a file's body.
struct ArtifactHeader {
  std::string kind;
  std::string backend;
  std::size_t qw = 0;  // scalar width
  std::size_t ew = 0;  // group element width
  std::size_t tw = 0;  // target element width
  std::uint32_t m = 0;
  std::string ctx;  // group fingerprint, hex

  friend bool operator==(const ArtifactHeader&, const ArtifactHeader&) = default;
};

using Row = std::vector<Bytes>;

struct Artifact {
  ArtifactHeader header;
  std::vector<Row> rows;
};

template <PairingGroup G>
ArtifactHeader header_for(const G& grp, std::string kind, std::uint32_t m) {
  std::ostringstream ctx;
  ctx << std::hex << grp.fingerprint();
  return {std::move(kind), std::string(backend_name(grp.backend())), grp.field().width(), grp.element_width(),
          grp.target_width(), m, ctx.str()};
}

namespace detail {
inline std::string render_body(const std::vector<Row>& rows) {
  std::string body;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) body.push_back('|');
      body += to_hex(row[i]);
    }
    body.push_back('\n');
  }
  return body;
}

inline std::size_t parse_size(std::string_view key, std::string_view text) {
  std::size_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) throw ArtifactError("bad header value for " + std::string(key));
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}
}  // namespace detail

inline std::string render_artifact(const Artifact& a) {
  const auto body = detail::render_body(a.rows);
  const auto& h = a.header;
  std::ostringstream os;
  os << "#evote|" << h.kind << "|backend=" << h.backend << "|qw=" << h.qw << "|ew=" << h.ew << "|tw=" << h.tw
     << "|m=" << h.m << "|ctx=" << h.ctx << "|sha256=" << to_hex(sha256(as_bytes(body))) << '\n'
     << body;
  return os.str();
}

inline Artifact parse_artifact(std::string_view text) {
  auto nl = text.find('\n');
  if (nl == std::string_view::npos) throw ArtifactError("missing header line");
  auto fields = detail::split(text.substr(0, nl), '|');
  if (fields.size() != 9 || fields[0] != "#evote") throw ArtifactError("malformed header line");
  Artifact a;
  auto& h = a.header;
  h.kind = fields[1];
  std::string digest;
  const std::string_view keys[] = {"backend", "qw", "ew", "tw", "m", "ctx", "sha256"};
  for (std::size_t i = 0; i < 7; ++i) {
    auto kv = fields[i + 2];
    if (kv.substr(0, keys[i].size() + 1) != std::string(keys[i]) + "=")
      throw ArtifactError("header field " + std::string(keys[i]) + " missing");
    auto val = kv.substr(keys[i].size() + 1);
    switch (i) {
      case 0: h.backend = val; break;
      case 1: h.qw = detail::parse_size("qw", val); break;
      case 2: h.ew = detail::parse_size("ew", val); break;
      case 3: h.tw = detail::parse_size("tw", val); break;
      case 4: h.m = static_cast<std::uint32_t>(detail::parse_size("m", val)); break;
      case 5: h.ctx = val; break;
      case 6: digest = val; break;
    }
  }
  auto body = text.substr(nl + 1);
  if (to_hex(sha256(as_bytes(body))) != digest) throw ArtifactError("body hash does not match header");
  while (!body.empty()) {
    auto end = body.find('\n');
    if (end == std::string_view::npos) throw ArtifactError("last record is not newline-terminated");
    Row row;
    for (auto f : detail::split(body.substr(0, end), '|')) row.push_back(from_hex(f));
    a.rows.push_back(std::move(row));
    body.remove_prefix(end + 1);
  }
  return a;
}

/// Rejects a parsed header that disagrees with what the reader expects.
inline void check_header(const ArtifactHeader& got, const ArtifactHeader& want) {
  auto mismatch = [](std::string_view field, const auto& g, const auto& w) {
    std::ostringstream os;
    os << "header mismatch on " << field << ": file has " << g << ", expected " << w;
    throw ArtifactError(os.str());
  };
  if (got.kind != want.kind) mismatch("kind", got.kind, want.kind);
  if (got.backend != want.backend) mismatch("backend", got.backend, want.backend);
  if (got.qw != want.qw) mismatch("qw", got.qw, want.qw);
  if (got.ew != want.ew) mismatch("ew", got.ew, want.ew);
  if (got.tw != want.tw) mismatch("tw", got.tw, want.tw);
  if (got.m != want.m) mismatch("m", got.m, want.m);
  if (got.ctx != want.ctx) mismatch("ctx", got.ctx, want.ctx);
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArtifactError("cannot write " + path.string());
  out << text;
  if (!out) throw ArtifactError("short write on " + path.string());
}

inline Artifact read_artifact(const std::filesystem::path& path, const ArtifactHeader& want) {
  try {
    auto a = parse_artifact(read_text(path));
    check_header(a.header, want);
    return a;
  } catch (const FormatError& e) {
    throw ArtifactError(path.filename().string() + ": " + e.what());
  }
}

inline void write_artifact(const std::filesystem::path& path, const Artifact& a) { write_text(path, render_artifact(a)); }

/// Cursor over one row with arity and width checks.
class RowReader {
 public:
  RowReader(const Row& row, std::size_t arity, std::string_view what) : row_(row), what_(what) {
    if (row.size() != arity)
      throw ArtifactError(std::string(what) + " row has " + std::to_string(row.size()) + " fields, expected " +
                          std::to_string(arity));
  }
  const Bytes& next() {
    if (pos_ >= row_.size()) throw ArtifactError(std::string(what_) + " row is short");
    return row_[pos_++];
  }
  std::string text() {
    const auto& b = next();
    return {b.begin(), b.end()};
  }
  std::uint32_t u32() {
    const auto& b = next();
    if (b.size() != 4) throw ArtifactError(std::string(what_) + " integer field must be 4 bytes");
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
  }
  Digest digest() {
    const auto& b = next();
    if (b.size() != 32) throw ArtifactError(std::string(what_) + " digest field must be 32 bytes");
    Digest d;
    std::copy(b.begin(), b.end(), d.begin());
    return d;
  }

 private:
  const Row& row_;
  std::string_view what_;
  std::size_t pos_ = 0;
};

inline Bytes text_field(std::string_view s) { return Bytes(s.begin(), s.end()); }

}  // namespace evote::io
