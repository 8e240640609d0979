#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "canon/corpus.hpp"
#include "canon/json_io.hpp"

using namespace canon;

TEST_CASE("hamiltonian round trip through JSON") {
    for (const Hamiltonian& h :
         {corpus::constant_28(), corpus::bump(), corpus::stieltjes_image()}) {
        CHECK(hamiltonian_from_json(hamiltonian_to_json(h)) == h);
    }
    const Hamiltonian nd({0.0, 1.0}, {SymMatrix2{1.0, 0.25, 1.0}},
                         diag_matrix(1.0, 1.0));
    CHECK(hamiltonian_from_json(hamiltonian_to_json(nd)) == nd);
}

TEST_CASE("diagonal shorthand parses") {
    const Json j = Json::parse(R"({"breakpoints":[0,1],"h1":[2,1],"h2":[0.5,1]})");
    CHECK(hamiltonian_from_json(j) == corpus::bump());
}

TEST_CASE("full form parses") {
    const Json j = Json::parse(R"({
      "breakpoints":[0,1],
      "pieces":[{"h11":1,"h12":0.25,"h22":1}],
      "tail":{"h11":1,"h12":0,"h22":1}})");
    const Hamiltonian h = hamiltonian_from_json(j);
    CHECK(h.piece(0).h12 == 0.25);
}

TEST_CASE("hamiltonian schema errors carry the field path") {
    CHECK_THROWS_WITH_AS(hamiltonian_from_json(Json::parse(R"({"h1":[1]})")),
                         "field 'hamiltonian': missing required key 'breakpoints'",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        hamiltonian_from_json(Json::parse(
            R"({"breakpoints":[0],"pieces":[],"tail":{"h11":1,"h12":"x","h22":1}})")),
        "field 'tail.h12': expected a number", std::invalid_argument);
    CHECK_THROWS_AS(hamiltonian_from_json(Json::parse(
                        R"({"breakpoints":[0,1],"h1":[2],"h2":[1]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(hamiltonian_from_json(Json::parse(
                        R"({"breakpoints":[1,2],"h1":[1,1],"h2":[1,1]})")),
                    std::invalid_argument);
}

TEST_CASE("string round trip through JSON") {
    for (const StringSpec& s :
         {corpus::free_string(), corpus::stieltjes_string(),
          corpus::unit_density_atom_string(), corpus::geometric_string(0.75, 6)}) {
        CHECK(string_from_json(string_to_json(s)) == s);
    }
}

TEST_CASE("string schema errors") {
    CHECK_THROWS_WITH_AS(string_from_json(Json::parse(R"({"density":[]})")),
                         "field 'string': missing required key 'L'",
                         std::invalid_argument);
    CHECK_THROWS_AS(
        string_from_json(Json::parse(R"({"L":"inf","density":[]})")),
        std::invalid_argument);
    // last density entry must reach L
    CHECK_THROWS_AS(string_from_json(Json::parse(
                        R"({"L":"inf","density":[{"upto":3,"value":1}]})")),
                    std::invalid_argument);
    // malformed atom
    CHECK_THROWS_AS(
        string_from_json(Json::parse(
            R"({"L":"inf","density":[{"upto":"inf","value":1}],"atoms":[{"pos":1}]})")),
        std::invalid_argument);
}

TEST_CASE("truncated JSON raises a parse error with location info") {
    auto parse_truncated = [] { return Json::parse(R"({"breakpoints":[0,)"); };
    CHECK_THROWS_AS(parse_truncated(), Json::parse_error);
}
