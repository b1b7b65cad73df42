#include <sstream>

#include "doctest.h"
#include "helmfc/dataset.hpp"
#include "helmfc/error.hpp"
#include "helmfc/matrix_io.hpp"
#include "test_util.hpp"

using namespace helmfc;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

std::string matrix_text(int m, int n, char delim = ',', double offset = 0.0) {
  std::ostringstream os;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) os << delim;
      os << offset + i * 1000 + j;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

TEST_CASE("atlas presets and custom") {
  CHECK(AtlasSpec::parse("CC400").roi_count == 392);
  CHECK(AtlasSpec::parse("CC200").roi_count == 200);
  CHECK(AtlasSpec::parse("AAL").roi_count == 116);
  CHECK(AtlasSpec::parse("custom:17").roi_count == 17);
  CHECK(AtlasSpec::parse("custom:17").token() == "custom:17");
  CHECK_THROWS_AS(AtlasSpec::parse("custom:1"), Error);
  CHECK_THROWS_AS(AtlasSpec::parse("custom:x"), Error);
  CHECK_THROWS_AS(AtlasSpec::parse("CC100"), Error);
}

TEST_CASE("load_manifest") {
  TempDir dir("manifest");
  dir.write("ok.csv", "subject_id,path,label\ns001,ts/s001.csv,NC\ns002,ts/s002.csv,ADHD-I\n\n");
  const auto recs = load_manifest(dir / "ok.csv");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].subject_id == "s001");
  CHECK(recs[0].label == SubjectLabel::NC);
  CHECK(recs[0].path == dir.path() / "ts/s001.csv");
  CHECK(recs[1].label == SubjectLabel::AdhdInattentive);

  dir.write("dup.csv", "subject_id,path,label\ns001,a.csv,NC\ns001,b.csv,ADHD-C\n");
  CHECK(kind_of([&] { load_manifest(dir / "dup.csv"); }) == ErrorKind::DuplicateId);
  dir.write("bad_label.csv", "subject_id,path,label\ns001,a.csv,ADHD-X\n");
  CHECK(kind_of([&] { load_manifest(dir / "bad_label.csv"); }) == ErrorKind::UnknownLabel);
  dir.write("bad_row.csv", "subject_id,path,label\ns001,a.csv\n");
  CHECK(kind_of([&] { load_manifest(dir / "bad_row.csv"); }) == ErrorKind::Parse);
  dir.write("no_header.csv", "s001,a.csv,NC\n");
  CHECK(kind_of([&] { load_manifest(dir / "no_header.csv"); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { load_manifest(dir / "missing.csv"); }) == ErrorKind::Io);
}

TEST_CASE("load_timeseries") {
  TempDir dir("ts");
  dir.write("cc400.csv", matrix_text(392, 230));
  dir.write("cc200.tsv", matrix_text(200, 230, '\t'));
  dir.write("nan.csv", "1,2,3\n4,NaN,6\n");
  dir.write("text.csv", "1,2,3\n4,abc,6\n");
  dir.write("ragged.csv", "1,2,3\n4,5\n");

  const auto cc400 = AtlasSpec::parse("CC400");
  const auto ts = load_timeseries({"s1", dir / "cc400.csv", SubjectLabel::NC}, cc400);
  CHECK(ts.m() == 392);
  CHECK(ts.n() == 230);
  CHECK(ts.data(3, 7) == 3007.0);

  CHECK(kind_of([&] { load_timeseries({"s2", dir / "cc200.tsv", SubjectLabel::NC}, cc400); }) ==
        ErrorKind::AtlasMismatch);
  const auto cc200 = load_timeseries({"s2", dir / "cc200.tsv", SubjectLabel::NC},
                                     AtlasSpec::parse("CC200"));
  CHECK(cc200.n() == 230);

  const auto tiny = AtlasSpec::parse("custom:2");
  CHECK(kind_of([&] { load_timeseries({"s3", dir / "nan.csv", SubjectLabel::NC}, tiny); }) ==
        ErrorKind::NonFinite);
  CHECK(kind_of([&] { load_timeseries({"s4", dir / "text.csv", SubjectLabel::NC}, tiny); }) ==
        ErrorKind::Parse);
  CHECK(kind_of([&] { load_timeseries({"s5", dir / "ragged.csv", SubjectLabel::NC}, tiny); }) ==
        ErrorKind::Parse);
}

TEST_CASE("equalize_timepoints") {
  Eigen::MatrixXd d(3, 236);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 236; ++j) d(i, j) = i * 1000 + j;
  const auto eq = equalize_timepoints(TimeSeriesMatrix{"s", d}, 230);
  CHECK(eq.n() == 230);
  CHECK(eq.m() == 3);
  for (int k = 0; k < 230; ++k) CHECK(eq.data(1, k) == d(1, k + 6));

  CHECK(equalize_timepoints(eq, 230).data == eq.data);  // idempotent
  const auto same = equalize_timepoints(TimeSeriesMatrix{"s", d.leftCols(230)}, 230);
  CHECK(same.data == d.leftCols(230));
  CHECK(kind_of([&] { equalize_timepoints(TimeSeriesMatrix{"s", d.leftCols(229)}, 230); }) ==
        ErrorKind::TooShort);

  std::vector<TimeSeriesMatrix> many{{"a", d}, {"b", d.leftCols(231)}, {"c", d.leftCols(230)}};
  for (const auto& s : equalize_timepoints(many, 230)) CHECK(s.n() == 230);
}

TEST_CASE("ingest: equalization, label collapse, fail-fast and skip-invalid") {
  TempDir dir("ingest");
  dir.write("a.csv", matrix_text(4, 12));
  dir.write("b.csv", matrix_text(4, 10));
  dir.write("c.csv", matrix_text(4, 11));
  dir.write("d.csv", matrix_text(4, 9));  // too short
  dir.write("e.csv", matrix_text(3, 12));  // wrong atlas
  dir.write("good.csv",
            "subject_id,path,label\na,a.csv,NC\nb,b.csv,ADHD-C\nc,c.csv,ADHD-H\n");
  dir.write("mixed.csv",
            "subject_id,path,label\na,a.csv,NC\nd,d.csv,ADHD-I\ne,e.csv,NC\nb,b.csv,ADHD-C\n");

  IngestOptions opts{AtlasSpec::parse("custom:4"), 10, false, 2};
  const auto ds = ingest(dir / "good.csv", opts);
  REQUIRE(ds.size() == 3);
  for (const auto& s : ds.subjects) CHECK(s.series.n() == 10);
  CHECK(ds.subjects[0].series.data(0, 0) == 2.0);  // leading two columns dropped
  CHECK(ds.binary_labels() == std::vector<int>{0, 1, 1});

  CHECK(kind_of([&] { ingest(dir / "mixed.csv", opts); }) == ErrorKind::TooShort);
  opts.skip_invalid = true;
  const auto partial = ingest(dir / "mixed.csv", opts);
  CHECK(partial.size() == 2);
  REQUIRE(partial.skipped.size() == 2);
  CHECK(partial.skipped[0].subject_id == "d");
  CHECK(partial.skipped[1].subject_id == "e");
}

TEST_CASE("write_dataset round trip") {
  TempDir dir("write");
  Dataset ds;
  ds.atlas = AtlasSpec::parse("custom:3");
  Eigen::MatrixXd d = Eigen::MatrixXd::Random(3, 5);
  ds.subjects.push_back({{"x1", "", SubjectLabel::AdhdCombined}, {"x1", d}});
  write_dataset(dir.path(), ds);
  const auto back = ingest(dir / "manifest.csv", {ds.atlas, 5, false, 1});
  REQUIRE(back.size() == 1);
  CHECK(back.subjects[0].record.label == SubjectLabel::AdhdCombined);
  CHECK(back.subjects[0].series.data == d);  // shortest round-trip formatting is exact
}
