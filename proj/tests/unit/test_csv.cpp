// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "ontaug/csv.hpp"

using ontaug::csv_escape;
using ontaug::split_csv_line;

TEST_CASE("plain fields") {
  CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_csv_line("a,,c") == std::vector<std::string>{"a", "", "c"});
  CHECK(split_csv_line("") == std::vector<std::string>{""});
  CHECK(split_csv_line("x,y\r") == std::vector<std::string>{"x", "y"});
}

TEST_CASE("quoted fields") {
  CHECK(split_csv_line(R"("a,b",c)") == std::vector<std::string>{"a,b", "c"});
  CHECK(split_csv_line(R"("say ""hi""",2)") == std::vector<std::string>{"say \"hi\"", "2"});
}

TEST_CASE("escape round-trips") {
  for (std::string s : {"plain", "with,comma", "quote\"inside", " padded ", ""}) {
    const auto line = csv_escape(s) + "," + csv_escape("next");
    const auto fields = split_csv_line(line);
    REQUIRE(fields.size() == 2);
    CHECK(fields[0] == s);
  }
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
}
