#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "shrinklab/errors.hpp"
#include "shrinklab/report.hpp"

using namespace shrinklab;

TEST_CASE("serialization is key-sorted with a trailing newline") {
    Json j;
    j["zeta"] = 1;
    j["alpha"] = 2;
    j["mid"] = Json{{"b", 1}, {"a", 2}};
    std::string s = serialize_report(j);
    CHECK(s.back() == '\n');
    CHECK(s.find("\"alpha\"") < s.find("\"mid\""));
    CHECK(s.find("\"mid\"") < s.find("\"zeta\""));
    CHECK(s.find("\"a\"") < s.find("\"b\""));
}

TEST_CASE("identical content serializes byte-identically") {
    Json a{{"x", 1.25}, {"y", Json::array({1, 2, 3})}};
    Json b;
    b["y"] = Json::array({1, 2, 3});
    b["x"] = 1.25;
    CHECK(serialize_report(a) == serialize_report(b));
}

TEST_CASE("config hash is stable and content-sensitive") {
    Json a{{"seed", 1}, {"model", "gaussian:1"}};
    Json b{{"model", "gaussian:1"}, {"seed", 1}};
    Json c{{"model", "gaussian:1"}, {"seed", 2}};
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("report file round trip") {
    Json j{{"value", 0.1}, {"list", Json::array({true, false})}};
    const char* path = "test_report_roundtrip.json";
    write_report(j, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == serialize_report(j));
    CHECK(Json::parse(buf.str()) == j);
    std::remove(path);
    CHECK_THROWS_AS(write_report(j, "/nonexistent-dir/x.json"), ValidationError);
}
