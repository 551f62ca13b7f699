#include <gtest/gtest.h>

#include "covpolar/error.hpp"
#include "covpolar/io/io.hpp"

namespace covpolar {
namespace {

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Jsonl, RecordsAndParsing) {
  EXPECT_EQ(vector_record({1, -1, 1, 0}), R"({"d":4,"norm2":3,"v":[1,-1,1,0]})");
  PrimVector v({1, 1, 1, 1});
  auto b = orthogonal_basis(v);
  std::string rec = lattice_record(v, b);
  EXPECT_EQ(rec.rfind(R"({"v":[1,1,1,1],"norm2":4,"basis":[[)", 0), 0u);

  auto recs = parse_vector_jsonl(vector_record({2, 0, 1}) + "\n\n" + vector_record({0, 0, 1}) + "\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].v, (IntVector{2, 0, 1}));
  EXPECT_EQ(recs[0].norm2, 5);
  EXPECT_EQ(recs[1].d, 3);
  EXPECT_THROW(parse_vector_jsonl("{not json}\n"), ValidationError);
  EXPECT_THROW(parse_vector_jsonl(R"({"d":3,"norm2":4,"v":[1,1,1]})"), ValidationError);
  EXPECT_THROW(parse_vector_jsonl(R"({"d":4,"norm2":3,"v":[1,1,1]})"), ValidationError);
  EXPECT_THROW(parse_vector_jsonl(R"({"v":"x"})"), ValidationError);
}

TEST(PolarCsv, RoundTrip) {
  PolarPoint p = polar_point(PrimVector({1, 2, 3, 1}));
  auto row = polar_row("sphere-15", p, 1.2);
  EXPECT_EQ(row.gram.size(), 9u);
  RealMatrix g = RealMatrix::Identity(3, 3);
  g(0, 1) = g(1, 0) = -0.1;
  g /= std::cbrt(g.determinant());
  Orientation o;
  o.u = {0.5, 0.5, 0.5, 0.5};
  auto haar = polar_row("haar", o, g, 1.2);
  std::string text = polar_csv(4, {row, haar}, {{"config", "{}"}, {"input_sha256", "{}"}});
  EXPECT_EQ(text.substr(0, 14), "# config: {}\n#");
  EXPECT_NE(text.find(polar_csv_header(4) + "\n"), std::string::npos);
  EXPECT_EQ(polar_csv_header(4).substr(0, 35), "source,norm2,u1,u2,u3,u4,lambda1,ra");

  auto parsed = parse_polar_csv(text, "x");
  ASSERT_EQ(parsed.meta.size(), 2u);
  EXPECT_EQ(parsed.meta[0].first, "config");
  auto const& c = parsed.corpus;
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.d, 4);
  EXPECT_EQ(c.n2[0], 15);
  EXPECT_EQ(c.n2[1], 0);
  EXPECT_EQ(c.lambda1[0], row.stats.lambda1);
  EXPECT_EQ(c.ratio[1], haar.stats.ratio);
  EXPECT_EQ(c.ball_count[0], row.stats.ball_count);
  EXPECT_EQ(c.u[2][0], static_cast<float>(p.orientation.u[2]));
  EXPECT_EQ(polar_csv(4, {row, haar}, {{"config", "{}"}, {"input_sha256", "{}"}}), text);

  EXPECT_THROW(parse_polar_csv("a,b\n", "x"), ValidationError);
  EXPECT_THROW(parse_polar_csv(polar_csv_header(3) + "\nhaar,0,1\n", "x"), ValidationError);
  EXPECT_THROW(parse_polar_csv("", "x"), ValidationError);
  EXPECT_THROW(polar_csv(3, {row}, {}), PreconditionError);
}

TEST(Formatting, DoublesAndHistogram) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2), "2");
  std::vector<HistogramBin> bins{{0, 0.5, 3}, {0.5, 1, 0}};
  EXPECT_EQ(histogram_csv(bins), "bin_left,bin_right,count\n0,0.5,3\n0.5,1,0\n");
}

}  // namespace
}  // namespace covpolar
