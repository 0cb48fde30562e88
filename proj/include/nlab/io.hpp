#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nlab {

// --- Minimal ordered-JSON emitter -----------------------------------------
//
// Output only (nothing in the project parses JSON). Object keys keep
// insertion order and all doubles are written with 17 significant digits so
// repeated runs produce byte-identical files.

struct Json;
using JsonArray = std::vector<Json>;
using JsonObject = std::vector<std::pair<std::string, Json>>;

struct Json {
  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string,
               JsonArray, JsonObject>
      value;

  Json() : value(nullptr) {}
  Json(std::nullptr_t) : value(nullptr) {}
  Json(bool b) : value(b) {}
  Json(int v) : value(static_cast<std::int64_t>(v)) {}
  Json(std::int64_t v) : value(v) {}
  Json(std::size_t v) : value(static_cast<std::int64_t>(v)) {}
  Json(double v) : value(v) {}
  Json(const char* s) : value(std::string(s)) {}
  Json(std::string s) : value(std::move(s)) {}
  Json(JsonArray a) : value(std::move(a)) {}
  Json(JsonObject o) : value(std::move(o)) {}

  // Two-space indented, trailing newline at top level.
  std::string dump() const;
};

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const Json& j);

// --- PGM -------------------------------------------------------------------

// Grayscale image dump. `binary` selects P5 (raw) vs P2 (ASCII).
// Values must lie in [0, 255].
void write_pgm(const std::string& path, const std::vector<std::uint8_t>& pixels,
               int rows, int cols, bool binary = true);

// --- Flat binary field dump -------------------------------------------------
//
// Layout: 16-byte header = magic "NLAB", u32 rows, u32 cols, u32 reserved(=0),
// all little-endian, followed by rows*cols float64 little-endian, row-major.

void write_field_binary(const std::string& path, const std::vector<double>& data,
                        std::uint32_t rows, std::uint32_t cols);

struct FieldBinary {
  std::uint32_t rows = 0, cols = 0;
  std::vector<double> data;
};
FieldBinary read_field_binary(const std::string& path);

// --- CSV --------------------------------------------------------------------

// Writes `header` then one line per row; doubles formatted with
// format_double. All rows must have header's arity.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace nlab
