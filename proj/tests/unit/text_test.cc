// Copyright 2026 The bias-audit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/text.h"

#include "core/errors.h"

#include <gtest/gtest.h>

#include <random>

#include "support/test_paths.h"

namespace bias_audit {
namespace {

TEST(QidTest, ParsesCanonicalForm) {
  auto q = Qid::Parse("Q2112");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->number(), 2112u);
  EXPECT_EQ(q->str(), "Q2112");
}

TEST(QidTest, RejectsMalformed) {
  for (const char *bad : {"", "Q", "q5", "Q05", "Q0", "P31", "Q12a", " Q5", "Q5 ", "Q-1",
                          "Q99999999999999999999999"}) {
    EXPECT_FALSE(Qid::IsValid(bad)) << bad;
  }
}

TEST(QidTest, FromEntityUri) {
  EXPECT_EQ(Qid::FromEntityUri("http://www.wikidata.org/entity/Q42"), Qid(42));
  EXPECT_EQ(Qid::FromEntityUri("Q42"), Qid(42));
  EXPECT_FALSE(Qid::FromEntityUri("http://www.wikidata.org/entity/L42"));
}

TEST(QidTest, OrdersNumerically) {
  EXPECT_LT(Qid(9), Qid(10));
  EXPECT_LT(*Qid::Parse("Q9"), *Qid::Parse("Q10"));
}

TEST(QidTest, RoundTripsRandomNumbers) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    Qid q(rng() % 1000000000 + 1);
    EXPECT_EQ(Qid::Parse(q.str()), q);
  }
}

TEST(TextTest, CodepointOffsets) {
  std::string s = "Zürich ist schön";  // ü and ö are two bytes each
  EXPECT_EQ(text::CodepointLength(s), 16u);
  EXPECT_EQ(text::ByteOffsetOfCodepoint(s, 2), 3u);
  EXPECT_EQ(text::ByteOffsetOfCodepoint(s, 16), s.size());
  EXPECT_FALSE(text::ByteOffsetOfCodepoint(s, 17));
  EXPECT_EQ(text::CodepointSubstr(s, 0, 6), "Zürich");
  EXPECT_EQ(text::CodepointSubstr(s, 11, 16), "schön");
  EXPECT_FALSE(text::CodepointSubstr(s, 5, 17));
  EXPECT_FALSE(text::CodepointSubstr(s, 6, 5));
}

TEST(TextTest, ValidatesUtf8) {
  EXPECT_TRUE(text::IsValidUtf8("plain"));
  EXPECT_TRUE(text::IsValidUtf8("\xE2\x82\xAC"));  // euro sign
  EXPECT_FALSE(text::IsValidUtf8("\xE2\x82"));
  EXPECT_FALSE(text::IsValidUtf8("\xFF"));
  EXPECT_FALSE(text::IsValidUtf8("\xC3"));
}

TEST(TextTest, NormalizeLabel) {
  EXPECT_EQ(text::NormalizeLabel("  New   York\tCity "), "new york city");
  EXPECT_EQ(text::NormalizeLabel(""), "");
}

TEST(TextTest, PercentCoding) {
  EXPECT_EQ(text::PercentDecode("Caf%C3%A9_de_Flore"), "Café_de_Flore");
  EXPECT_EQ(text::PercentDecode("100%"), "100%");
  EXPECT_EQ(text::PercentDecode("%2"), "%2");
  std::string s = "a b|c&d=é";
  EXPECT_EQ(text::PercentDecode(text::UrlEncode(s)), s);
  EXPECT_EQ(text::UrlEncode("a b"), "a%20b");
}

TEST(TextTest, SplitJoin) {
  auto parts = text::Split("a,,b", ',');
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[1], "");
  EXPECT_EQ(text::Join(parts, "|"), "a||b");
}

TEST(TextTest, XmlEscape) {
  EXPECT_EQ(text::XmlEscape("<a href=\"x\">&'</a>"),
            "&lt;a href=&quot;x&quot;&gt;&amp;&apos;&lt;/a&gt;");
}

TEST(TextTest, CsvQuoting) {
  auto rows = text::ParseCsv("a,b\n\"x, y\",\"he said \"\"hi\"\"\"\n\n\"multi\nline\",z\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "x, y");
  EXPECT_EQ(rows[1][1], "he said \"hi\"");
  EXPECT_EQ(rows[2][0], "multi\nline");
  EXPECT_EQ(rows[2][1], "z");
}

TEST(TextTest, CsvCrLf) {
  auto rows = text::ParseCsv("a,b\r\n1,2\r\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][1], "2");
}

TEST(TextTest, RoundedPercent) {
  EXPECT_EQ(text::RoundedPercent(28.0 / 33), 85);
  EXPECT_EQ(text::RoundedPercent(5.0 / 33), 15);
  EXPECT_EQ(text::RoundedPercent(0.125), 13);
  EXPECT_EQ(text::RoundedPercent(0.0), 0);
  EXPECT_EQ(text::RoundedPercent(1.0), 100);
}

TEST(FilesTest, WriteAtomicReplacesContent) {
  testing::TempDir dir;
  auto path = dir / "out.txt";
  files::WriteAtomic(path, "first");
  files::WriteAtomic(path, "second");
  EXPECT_EQ(files::ReadAll(path), "second");
  for (const auto &entry : std::filesystem::directory_iterator(dir.path())) {
    EXPECT_EQ(entry.path().filename(), "out.txt");
  }
}

TEST(FilesTest, ReadMissingIsConfigError) {
  try {
    files::ReadAll("/nonexistent/file");
    FAIL();
  } catch (const AuditError &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

TEST(WarningsTest, CountsAndMerges) {
  Warnings a, b;
  a.Add("x");
  a.Add("x", 2);
  b.Add("y");
  a.Merge(b);
  EXPECT_EQ(a.Count("x"), 3u);
  EXPECT_EQ(a.Count("y"), 1u);
  EXPECT_EQ(a.Total(), 4u);
  EXPECT_EQ(a.Count("z"), 0u);
}

}  // namespace
}  // namespace bias_audit
