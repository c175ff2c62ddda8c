#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "mintorus/report.hpp"

using namespace mintorus;

namespace {

Document sample() {
  Document doc;
  doc.params = {{"m", 2LL}, {"n", 1LL}, {"parity", std::string("even")}};
  doc.spectra = {{"l", "i", "lambda", "zeros", "flavor"}, {}};
  doc.spectra.add({0LL, 0LL, 0.0, 0LL, std::string("periodic-merged")});
  doc.spectra.add({1LL, 0LL, 0.226138132558123, 0LL, std::string("periodic-merged")});
  doc.spectra.add({1LL, 1LL, 1.4231715070812345, 2LL, std::string("antiperiodic-merged")});
  doc.checks = {{"id", "status", "margin", "detail"}, {}};
  doc.checks.add({std::string("x"), std::string("pass"), 1.0 / 3.0, std::string("a, \"quoted\" detail")});
  return doc;
}

}  // namespace

TEST(Format, Numbers) {
  EXPECT_EQ(format_number(2.0, 12), "2");
  EXPECT_EQ(format_number(1.0 / 3.0, 4), "0.3333");
  EXPECT_EQ(format_number(138.04663758860912, 6), "138.047");
  EXPECT_EQ(parse_format("csv"), Format::csv);
  EXPECT_THROW(parse_format("xml"), InvalidArgument);
}

TEST(OutputConfig, PrecisionRange) {
  OutputConfig c;
  c.precision = 3;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.precision = 18;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.precision = 17;
  EXPECT_NO_THROW(c.validate());
}

TEST(Csv, RoundTripAtDeclaredPrecision) {
  const Document doc = sample();
  for (int precision : {4, 8, 12, 17}) {
    const auto rows = parse_csv(render_csv(doc.spectra, precision));
    ASSERT_EQ(rows.size(), doc.spectra.rows.size() + 1);
    EXPECT_EQ(rows[0], doc.spectra.columns);
    for (std::size_t r = 0; r < doc.spectra.rows.size(); ++r) {
      const double original = std::get<double>(doc.spectra.rows[r][2]);
      const double parsed = std::stod(rows[r + 1][2]);
      EXPECT_EQ(format_number(parsed, precision), format_number(original, precision));
      EXPECT_NEAR(parsed, original, std::pow(10.0, 1 - precision) * (1 + std::abs(original)));
      EXPECT_EQ(rows[r + 1][4], std::get<std::string>(doc.spectra.rows[r][4]));
    }
  }
  const auto checks = parse_csv(render_csv(doc.checks, 12));
  EXPECT_EQ(checks[1][3], "a, \"quoted\" detail");
}

TEST(Json, SchemaAndPrecision) {
  const auto j = nlohmann::json::parse(render_json(sample(), 6));
  for (const char* key : {"params", "checks", "spectra", "functionals"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j["checks"].is_array());
  EXPECT_TRUE(j["spectra"].is_array());
  EXPECT_TRUE(j["functionals"].is_object());
  EXPECT_EQ(j["params"]["m"], 2);
  EXPECT_DOUBLE_EQ(j["spectra"][2]["lambda"].get<double>(), 1.42317);
  EXPECT_DOUBLE_EQ(j["checks"][0]["margin"].get<double>(), 0.333333);
}

TEST(Json, NonFiniteBecomesNull) {
  Document doc;
  doc.checks = {{"margin"}, {}};
  doc.checks.add({-std::numeric_limits<double>::infinity()});
  const auto j = nlohmann::json::parse(render_json(doc, 12));
  EXPECT_TRUE(j["checks"][0]["margin"].is_null());
}

TEST(Table, RowWidthChecked) {
  Table t{{"a", "b"}, {}};
  EXPECT_THROW(t.add({1LL}), Error);
}

TEST(Text, ContainsAllSections) {
  const std::string s = render_text(sample(), 6);
  EXPECT_NE(s.find("m=2"), std::string::npos);
  EXPECT_NE(s.find("antiperiodic-merged"), std::string::npos);
  EXPECT_NE(s.find("1.42317"), std::string::npos);
}

TEST(Emit, WritesFileAndReportsFailure) {
  OutputConfig cfg;
  cfg.out_path = testing::TempDir() + "/mintorus_emit_test.txt";
  emit("hello\n", cfg);
  std::ifstream f(*cfg.out_path);
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "hello");
  std::remove(cfg.out_path->c_str());
  cfg.out_path = "/nonexistent-dir/x/y.txt";
  EXPECT_THROW(emit("x", cfg), IoError);
}
