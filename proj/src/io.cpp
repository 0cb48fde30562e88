#include "nlab/io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "nlab/util.hpp"

namespace nlab {

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_rec(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  struct Visitor {
    std::string& out;
    const std::string& pad;
    const std::string& pad_in;
    int indent;
    void operator()(std::nullptr_t) const { out += "null"; }
    void operator()(bool b) const { out += b ? "true" : "false"; }
    void operator()(std::int64_t v) const { out += std::to_string(v); }
    void operator()(double v) const { out += format_double(v); }
    void operator()(const std::string& s) const { append_escaped(out, s); }
    void operator()(const JsonArray& a) const {
      if (a.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < a.size(); ++i) {
        out += pad_in;
        dump_rec(a[i], out, indent + 1);
        if (i + 1 < a.size()) out += ',';
        out += '\n';
      }
      out += pad;
      out += ']';
    }
    void operator()(const JsonObject& o) const {
      if (o.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      for (std::size_t i = 0; i < o.size(); ++i) {
        out += pad_in;
        append_escaped(out, o[i].first);
        out += ": ";
        dump_rec(o[i].second, out, indent + 1);
        if (i + 1 < o.size()) out += ',';
        out += '\n';
      }
      out += pad;
      out += '}';
    }
  };
  std::visit(Visitor{out, pad, pad_in, indent}, j.value);
}

void put_u32_le(std::string& out, std::uint32_t v) {
  out += static_cast<char>(v & 0xff);
  out += static_cast<char>((v >> 8) & 0xff);
  out += static_cast<char>((v >> 16) & 0xff);
  out += static_cast<char>((v >> 24) & 0xff);
}

std::uint32_t get_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::string Json::dump() const {
  std::string out;
  dump_rec(*this, out, 0);
  out += '\n';
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump());
}

void write_pgm(const std::string& path, const std::vector<std::uint8_t>& pixels,
               int rows, int cols, bool binary) {
  if (rows <= 0 || cols <= 0 ||
      pixels.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("write_pgm: pixel buffer does not match dims");
  std::string out;
  out += binary ? "P5\n" : "P2\n";
  out += std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  if (binary) {
    out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  } else {
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        if (j) out += ' ';
        out += std::to_string(pixels[static_cast<std::size_t>(i) * cols + j]);
      }
      out += '\n';
    }
  }
  write_text_file(path, out);
}

void write_field_binary(const std::string& path, const std::vector<double>& data,
                        std::uint32_t rows, std::uint32_t cols) {
  if (data.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("write_field_binary: size mismatch");
  std::string out;
  out.reserve(16 + data.size() * 8);
  out += "NLAB";
  put_u32_le(out, rows);
  put_u32_le(out, cols);
  put_u32_le(out, 0);
  static_assert(sizeof(double) == 8);
  for (double v : data) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int b = 0; b < 8; ++b)
      out += static_cast<char>((bits >> (8 * b)) & 0xff);
  }
  write_text_file(path, out);
}

FieldBinary read_field_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::string raw((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());
  if (raw.size() < 16 || raw.compare(0, 4, "NLAB") != 0)
    throw std::runtime_error("not an NLAB field file: " + path);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(raw.data());
  FieldBinary fb;
  fb.rows = get_u32_le(p + 4);
  fb.cols = get_u32_le(p + 8);
  const std::size_t n = static_cast<std::size_t>(fb.rows) * fb.cols;
  if (raw.size() != 16 + n * 8)
    throw std::runtime_error("truncated NLAB field file: " + path);
  fb.data.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(p[16 + i * 8 + b]) << (8 * b);
    std::memcpy(&fb.data[i], &bits, 8);
  }
  return fb;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::string out = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace nlab
