#include "forsage/dot_export.hpp"
#include "support/dot_grammar.hpp"
#include "support/fuzz.hpp"
#include "support/scenarios.hpp"

#include <doctest.h>

using namespace forsage;
namespace dot = testsupport::dot;

TEST_CASE("grammar checker accepts valid DOT")
{
    for (const char* ok : {
             "digraph {}",
             "strict digraph G { a -> b -> c; }",
             "graph g { a -- b [color=red, style=\"dashed\"]; }",
             "digraph { node [shape=box]; \"x y\" [label=\"a\\\"b\"]; x:p:n -> y }",
             "digraph { subgraph cluster_a { rank=same; a; b } a -> {c d} }",
             "/* c */ digraph G { // line\n a -> b; -1.5 -> .5 }",
             "digraph { a [label=<<b>x</b>>] }",
             "DiGraph G { Node [shape=box] }",
         }) {
        const auto r = dot::check(ok);
        INFO(ok << " : " << r.error);
        CHECK(r.ok);
    }
}

TEST_CASE("grammar checker rejects malformed DOT")
{
    for (const char* bad : {
             "",
             "digraph { a -> b",
             "digraph { a -- b }",
             "graph { a -> b }",
             "digraph { a [label=] }",
             "digraph { a [label=\"x] }",
             "digraph { 1abc }",
             "digraph { node }",
             "digraph { a -> }",
             "tree { }",
             "digraph {} extra",
             "digraph { a = }",
         }) {
        INFO(bad);
        CHECK_FALSE(dot::check(bad).ok);
    }
}

TEST_CASE("focused X3 export of the five-partner scenario")
{
    const auto sc = testsupport::charlie_scenario();
    const auto text = export_dot(sc.state, Address { "charlie" }, MatrixKind::X3, Level(1));
    const auto r = dot::check(text);
    INFO(r.error);
    REQUIRE(r.ok);
    CHECK(text.find("digraph forsage_x3_level1") == 0);
    CHECK(text.find("reinvest=1") != std::string::npos);
    CHECK(text.find("partners=5") != std::string::npos);
    CHECK(text.find("cluster_slots") != std::string::npos);
    // Line breaks inside labels are the DOT escape \n, not an escaped backslash.
    CHECK(text.find("charlie\\nreinvest=1") != std::string::npos);
    CHECK(text.find("\\\\n") == std::string::npos);
    // Opened slots are boxes, the ten unopened ones are numbered circles.
    std::size_t circles = 0;
    for (auto pos = text.find("shape=circle"); pos != std::string::npos; pos = text.find("shape=circle", pos + 1))
        ++circles;
    CHECK(circles == 10);
    // p4 and p5 sit in charlie's slot; p1..p3 were cleared at the reinvest
    // but still name charlie as their slot referrer.
    for (const char* p : { "p1", "p2", "p3", "p4", "p5" })
        CHECK(text.find("\"charlie\" -> \"" + std::string(p) + "\"") != std::string::npos);
}

TEST_CASE("blocked slots are marked")
{
    const auto sc = testsupport::x4_spillover_scenario();
    const auto text = export_dot(sc.state, std::nullopt, MatrixKind::X4, Level(1));
    REQUIRE(dot::check(text).ok);
    CHECK(text.find("blocked") != std::string::npos);
    CHECK(text.find("closedPart=") != std::string::npos);
    CHECK(text.find("fillcolor=\"lightgray\"") != std::string::npos);
}

TEST_CASE("whole-graph exports of random states are valid DOT")
{
    const auto log = testsupport::fuzz_log(3, { .transactions = 800 });
    auto st = new_state(default_owner_address());
    replay(st, log);
    for (auto m : { MatrixKind::X3, MatrixKind::X4 }) {
        for (int l : { 1, 2, 5, 12 }) {
            const auto text = export_dot(st, std::nullopt, m, Level(l));
            const auto r = dot::check(text);
            INFO(r.error);
            CHECK(r.ok);
        }
        const auto focused = export_dot(st, st.user(1).address, m, Level(1));
        CHECK(dot::check(focused).ok);
    }
}

TEST_CASE("unknown focus is an error")
{
    const auto sc = testsupport::charlie_scenario();
    CHECK_THROWS_AS(export_dot(sc.state, Address { "nobody" }, MatrixKind::X3, Level(1)), ContractError);
}

TEST_CASE("addresses that need escaping stay valid")
{
    auto st = new_state(Address { "own\"er" });
    const auto text = export_dot(st, std::nullopt, MatrixKind::X3, Level(1));
    CHECK(dot::check(text).ok);
}
