#include "covpolar/io/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "covpolar/error.hpp"

namespace covpolar {

using nlohmann::json;
using nlohmann::ordered_json;

std::string sha256_hex(std::string const& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static char const* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_file(std::string const& path) { return sha256_hex(read_file(path)); }

void write_file(std::string const& path, std::string const& bytes) {
  std::string const tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open output file '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ValidationError("cannot write output file '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ValidationError("cannot move output into '" + path + "': " + ec.message());
}

std::string vector_record(IntVector const& v) {
  ordered_json j;
  j["d"] = v.size();
  j["norm2"] = norm2_of(v);
  j["v"] = v;
  return j.dump();
}

std::string lattice_record(PrimVector const& v, SublatticeBasis const& b) {
  ordered_json j;
  j["v"] = v.coords();
  j["norm2"] = v.norm2();
  ordered_json cols = ordered_json::array();
  for (std::size_t c = 0; c < b.basis.cols(); ++c) {
    ordered_json col = ordered_json::array();
    for (std::size_t r = 0; r < b.basis.rows(); ++r) col.push_back(b.basis(r, c).convert_to<std::int64_t>());
    cols.push_back(col);
  }
  j["basis"] = cols;
  return j.dump();
}

std::vector<VectorRecord> parse_vector_jsonl(std::string const& text) {
  std::vector<VectorRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    json j;
    try {
      j = json::parse(line);
    } catch (json::exception const& e) {
      throw ValidationError(where() + "invalid JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("v") || !j["v"].is_array()) {
      throw ValidationError(where() + "record needs an integer array 'v'");
    }
    VectorRecord r;
    try {
      r.v = j["v"].get<IntVector>();
      r.d = j.value("d", static_cast<int>(r.v.size()));
      r.norm2 = j.contains("norm2") ? j["norm2"].get<std::int64_t>() : norm2_of(r.v);
    } catch (json::exception const& e) {
      throw ValidationError(where() + e.what());
    }
    if (r.d != static_cast<int>(r.v.size())) throw ValidationError(where() + "d does not match v");
    if (r.norm2 != norm2_of(r.v)) throw ValidationError(where() + "norm2 does not match v");
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

PolarRow polar_row(std::string source, PolarPoint const& p, double radius) {
  PolarRow r;
  r.source = std::move(source);
  r.norm2 = p.n2;
  r.u = p.orientation.u;
  r.stats = shape_statistics(p.shape, radius);
  for (auto const& e : p.shape.gram().matrix().entries()) r.gram.push_back(e.str());
  return r;
}

PolarRow polar_row(std::string source, Orientation const& o, RealMatrix const& shape,
                   double radius) {
  PolarRow r;
  r.source = std::move(source);
  r.norm2 = 0;
  r.u = o.u;
  r.stats = shape_statistics_real(shape, radius);
  for (Eigen::Index i = 0; i < shape.rows(); ++i)
    for (Eigen::Index j = 0; j < shape.cols(); ++j) r.gram.push_back(format_double(shape(i, j)));
  return r;
}

std::string polar_csv_header(int d) {
  std::string h = "source,norm2";
  for (int k = 1; k <= d; ++k) h += ",u" + std::to_string(k);
  h += ",lambda1,ratio,ball_count";
  for (int i = 1; i < d; ++i)
    for (int j = 1; j < d; ++j) h += ",g" + std::to_string(i) + "_" + std::to_string(j);
  return h;
}

std::string polar_csv(int d, std::vector<PolarRow> const& rows,
                      std::vector<std::pair<std::string, std::string>> const& meta) {
  std::string out;
  for (auto const& [k, v] : meta) out += "# " + k + ": " + v + "\n";
  out += polar_csv_header(d) + "\n";
  for (auto const& r : rows) {
    if (r.u.size() != static_cast<std::size_t>(d) ||
        r.gram.size() != static_cast<std::size_t>((d - 1) * (d - 1))) {
      throw PreconditionError("polar row does not match the CSV dimension");
    }
    out += r.source;
    out += ',' + std::to_string(r.norm2);
    for (double x : r.u) out += ',' + format_double(x);
    out += ',' + format_double(r.stats.lambda1);
    out += ',' + format_double(r.stats.ratio);
    out += ',' + std::to_string(r.stats.ball_count);
    for (auto const& g : r.gram) out += ',' + g;
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <class T>
T parse_number(std::string_view s, std::size_t lineno) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("line " + std::to_string(lineno) + ": bad number '" +
                          std::string(s) + "'");
  }
  return value;
}

}  // namespace

PolarCsv parse_polar_csv(std::string const& text, std::string const& label) {
  PolarCsv out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  int d = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto body = std::string_view(line).substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      auto colon = body.find(": ");
      if (colon == std::string_view::npos) continue;
      out.meta.emplace_back(std::string(body.substr(0, colon)),
                            std::string(body.substr(colon + 2)));
      continue;
    }
    if (d == 0) {
      auto cols = split(line, ',');
      int u = 0;
      while (2 + u < static_cast<int>(cols.size()) && cols[2 + u] == "u" + std::to_string(u + 1)) ++u;
      if (u < 2 || line != polar_csv_header(u)) {
        throw ValidationError("line " + std::to_string(lineno) + ": not a polar CSV header");
      }
      d = u;
      width = cols.size();
      out.corpus = Corpus(d, label);
      continue;
    }
    auto cols = split(line, ',');
    if (cols.size() != width) {
      throw ValidationError("line " + std::to_string(lineno) + ": expected " +
                            std::to_string(width) + " fields");
    }
    std::int64_t n2 = parse_number<std::int64_t>(cols[1], lineno);
    std::vector<double> u(d);
    for (int k = 0; k < d; ++k) u[k] = parse_number<double>(cols[2 + k], lineno);
    ShapeStatistics s;
    s.lambda1 = parse_number<double>(cols[2 + d], lineno);
    s.ratio = parse_number<double>(cols[3 + d], lineno);
    s.ball_count = parse_number<std::uint64_t>(cols[4 + d], lineno);
    out.corpus.add(n2, u, s);
  }
  if (d == 0) throw ValidationError("polar CSV has no header");
  return out;
}

std::string histogram_csv(std::vector<HistogramBin> const& bins) {
  std::string out = "bin_left,bin_right,count\n";
  for (auto const& b : bins) {
    out += format_double(b.left) + ',' + format_double(b.right) + ',' + std::to_string(b.count) +
           '\n';
  }
  return out;
}

std::string json_text(json const& j) { return j.dump(2) + "\n"; }
std::string json_text(ordered_json const& j) { return j.dump(2) + "\n"; }

}  // namespace covpolar
