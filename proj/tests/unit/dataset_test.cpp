#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "glmcorr/dataset.hpp"
#include "glmcorr/errors.hpp"
#include "instances.hpp"

namespace glmcorr {
namespace {

DataFrame parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in, "mem.csv");
}

TEST(Dataset, ParsesHeaderAndRows) {
  const DataFrame df = parse("a,b,c\n1,2,3\n\n# comment\n4.5, -6e-1 ,7\n");
  ASSERT_EQ(df.rows(), 2);
  ASSERT_EQ(df.cols(), 3);
  EXPECT_EQ(df.names[1], "b");
  EXPECT_DOUBLE_EQ(df.values(1, 0), 4.5);
  EXPECT_DOUBLE_EQ(df.values(1, 1), -0.6);
}

TEST(Dataset, HandlesCarriageReturns) {
  const DataFrame df = parse("x,y\r\n1,2\r\n");
  EXPECT_EQ(df.names[1], "y");
  EXPECT_DOUBLE_EQ(df.values(0, 1), 2.0);
}

TEST(Dataset, MalformedLineIsNamed) {
  try {
    parse("a,b\n1,2\n3,oops\n");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("mem.csv:3:"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse("a,b\n1,2,3\n"), DataError);
  EXPECT_THROW(parse(""), DataError);
}

TEST(Dataset, MissingFile) { EXPECT_THROW(read_csv("/nonexistent/file.csv"), FileError); }

TEST(Dataset, ColumnLookup) {
  const DataFrame df = parse("a,b\n1,2\n3,4\n");
  EXPECT_EQ(df.column("b"), 1);
  EXPECT_EQ(df.column("1"), 0);
  EXPECT_EQ(df.get("b")[1], 4.0);
  EXPECT_THROW(df.column("z"), DataError);
  EXPECT_THROW(df.column("3"), DataError);
}

TEST(Dataset, BuildsDesign) {
  const DataFrame df = parse("y,u,v\n1,2,3\n4,5,6\n7,8,10\n");
  const DesignMatrix X = build_design(df, {"v", "u"}, true);
  ASSERT_EQ(X.cols(), 3);
  EXPECT_EQ(X.column_names[0], "(Intercept)");
  EXPECT_EQ(X.column_names[1], "v");
  EXPECT_EQ(X.x(2, 1), 10.0);
  EXPECT_EQ(X.x(2, 0), 1.0);
  EXPECT_EQ(build_design(df, {"u"}, false).cols(), 1);
}

TEST(Dataset, ReadsSquid) {
  const DataFrame df = read_csv(testsupport::data_path("squid.csv"));
  EXPECT_EQ(df.rows(), 22);
  EXPECT_NO_THROW(df.column("WT"));
}

}  // namespace
}  // namespace glmcorr
