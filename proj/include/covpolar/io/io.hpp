#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "covpolar/lattice/ortho.hpp"
#include "covpolar/polar/polar.hpp"
#include "covpolar/stats/corpus.hpp"
#include "covpolar/stats/stats.hpp"

namespace covpolar {

std::string sha256_hex(std::string const& bytes);
std::string read_file(std::string const& path);
std::string sha256_file(std::string const& path);
// Writes through a temporary file and renames, so readers never see a
// partial output.
void write_file(std::string const& path, std::string const& bytes);

// {"d":int,"norm2":int,"v":[...]} on one line.
std::string vector_record(IntVector const& v);
// {"v":[...],"norm2":N,"basis":[[...],...]} with basis columns.
std::string lattice_record(PrimVector const& v, SublatticeBasis const& b);

struct VectorRecord {
  int d;
  std::int64_t norm2;
  IntVector v;
};
// Parses and validates a vector JSONL stream (d and norm2 must match v).
std::vector<VectorRecord> parse_vector_jsonl(std::string const& text);

// One CSV row of a polar corpus.
struct PolarRow {
  std::string source;
  std::int64_t norm2 = 0;
  std::vector<double> u;
  ShapeStatistics stats{};
  // Row-major Gram entries, already formatted: integers for lattices from
  // spheres, 17 significant digits for sampled real shapes.
  std::vector<std::string> gram;
};

PolarRow polar_row(std::string source, PolarPoint const& p, double radius);
PolarRow polar_row(std::string source, Orientation const& o, RealMatrix const& shape,
                   double radius);

std::string format_double(double x);

// '#'-prefixed metadata lines, then the header, then one line per row.
std::string polar_csv(int d, std::vector<PolarRow> const& rows,
                      std::vector<std::pair<std::string, std::string>> const& meta);
std::string polar_csv_header(int d);

struct PolarCsv {
  std::vector<std::pair<std::string, std::string>> meta;
  Corpus corpus;
};
// Reads the statistics columns of a polar CSV into a corpus labelled with
// the file's source values.
PolarCsv parse_polar_csv(std::string const& text, std::string const& label);

std::string histogram_csv(std::vector<HistogramBin> const& bins);

// JSON text with two-space indentation and a trailing newline.
std::string json_text(nlohmann::json const& j);
std::string json_text(nlohmann::ordered_json const& j);

}  // namespace covpolar
