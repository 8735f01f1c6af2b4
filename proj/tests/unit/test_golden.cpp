#include <sstream>

#include "app.hpp"
#include "polarkit/lexicon.hpp"
#include "polarkit/polling.hpp"
#include "test_util.hpp"

using namespace polarkit;

namespace {

const std::filesystem::path kGolden = POLARKIT_GOLDEN_DIR;

PollingReport cell(const std::string& column, bool segmented, double acc, std::size_t unclassified) {
  PollingReport r;
  r.column = column;
  r.segmentation = segmented;
  r.accuracy_pct = acc;
  r.unclassified = unclassified;
  r.total = 201;
  return r;
}

}  // namespace

TEST_SUITE("golden") {
  TEST_CASE("full polling grid renders verbatim") {
    const std::vector<PollingReport> reports = {
        cell("SentiWordNet", false, 61.86, 23), cell("Our resource", false, 62.84, 14),
        cell("Bigram", false, 78.97, 108),      cell("Uni+Bigrams", false, 55.44, 10),
        cell("SentiWordNet", true, 60.23, 20),  cell("Our resource", true, 58.29, 18),
        cell("Bigram", true, 49.46, 36),        cell("Uni+Bigrams", true, 57.89, 8)};
    std::ostringstream out;
    emit_polling_table(reports, out);
    CHECK(out.str() == testutil::read_text(kGolden / "polling_grid.tsv"));
  }

  TEST_CASE("SentiWordNet distribution row renders verbatim") {
    std::ostringstream out;
    write_stats_table(out, {{"SentiWordNet", {2135, 4076, 359, 1093}}});
    CHECK(out.str() == testutil::read_text(kGolden / "label_distribution.tsv"));
  }

  TEST_CASE("demo polling output is stable") {
    std::ostringstream out, err;
    const int code = cli::run({"poll", "--config", POLARKIT_DATA_DIR "/demo/demo.conf"}, out, err);
    REQUIRE(code == 0);
    CHECK(testutil::strip_comments(out.str()) == testutil::read_text(kGolden / "poll_demo.tsv"));
  }
}
