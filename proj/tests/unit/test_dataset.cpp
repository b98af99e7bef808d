#include "fixtures.hpp"

#include "goliath/dataset.hpp"
#include "goliath/diagnostics.hpp"
#include "goliath/random.hpp"
#include "goliath/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace goliath;

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

Support inferred(const std::vector<double>& col) {
    Matrix m(col.size(), 1);
    for (std::size_t i = 0; i < col.size(); ++i) m(i, 0) = col[i];
    return infer_schema(m, {"c"}).front().kind.support;
}

} // namespace

TEST_CASE("infer_schema picks the narrowest support") {
    CHECK(inferred({0, 1, 3, 2, 2}) == Support::Count);
    CHECK(inferred({0.1, 0.9, 0.5}) == Support::UnitInterval);
    CHECK(inferred({-1.0, 0.5, 2.0, -0.3}) == Support::RealLine);

    Rng rng(3);
    std::vector<double> g(400);
    for (auto& v : g) v = rng.gamma(2.0) + 0.02;
    // Moment skewness computed here, independently of the library.
    double m = 0;
    for (double v : g) m += v;
    m /= g.size();
    double m2 = 0, m3 = 0;
    for (double v : g) {
        m2 += (v - m) * (v - m);
        m3 += (v - m) * (v - m) * (v - m);
    }
    m2 /= g.size();
    m3 /= g.size();
    REQUIRE(m3 / std::pow(m2, 1.5) > 1.0);
    Matrix gm(g.size(), 1, g);
    const auto s = infer_schema(gm, {"g"}).front();
    CHECK(s.kind.support == Support::PositiveHalfLine);
    CHECK(s.kind.lower == *std::min_element(g.begin(), g.end()));

    std::vector<double> neg(g.size());
    std::transform(g.begin(), g.end(), neg.begin(), [](double v) { return -v; });
    CHECK(inferred(neg) == Support::NegativeHalfLine);

    WarningCapture w;
    CHECK(inferred({4.5, 4.5, 4.5}) == Support::RealLine);
    CHECK(!w.messages().empty());
}

TEST_CASE("load_csv drops incomplete rows and reports them") {
    test::TempDir dir("ds");
    write_text(dir / "a.csv", "x,y\n1,2\n3,\n5,6\n");
    const auto loaded = load_csv(dir / "a.csv");
    CHECK(loaded.dataset.rows() == 2);
    CHECK(loaded.dropped_rows == 1);

    write_text(dir / "na.csv", "x,y\n1,NA\nNaN,2\n0.5,3\n0.25,1\n");
    CHECK(load_csv(dir / "na.csv").dropped_rows == 2);
}

TEST_CASE("load_csv rejects bad input") {
    test::TempDir dir("bad");
    CHECK_THROWS(load_csv(dir / "missing.csv"));
    write_text(dir / "empty.csv", "");
    CHECK_THROWS(load_csv(dir / "empty.csv"));
    write_text(dir / "header.csv", "x,y\n");
    CHECK_THROWS(load_csv(dir / "header.csv"));
    write_text(dir / "cat.csv", "x,y\na,1\nb,2\nc,3\n");
    CHECK_THROWS(load_csv(dir / "cat.csv"));

    write_text(dir / "u.csv", "p,y\n0.2,1\n1.5,2\n0.4,3\n");
    const std::vector<ColumnSchema> schema = {{"p", VariableKind::unit_interval(), false},
                                              {"y", VariableKind::real_line(), true}};
    try {
        load_csv(dir / "u.csv", schema);
        FAIL("expected a support error");
    } catch (const SupportError& e) {
        CHECK(e.column() == "p");
        CHECK(e.row() == 3); // file line, header is line 1
        CHECK(std::string(e.what()).find("p") != std::string::npos);
    }
    const std::vector<ColumnSchema> wrong = {{"q", VariableKind::real_line(), false},
                                             {"y", VariableKind::real_line(), true}};
    CHECK_THROWS(load_csv(dir / "u.csv", wrong));
    CHECK_THROWS(load_csv(dir / "u.csv", std::nullopt, std::string("nope")));
}

TEST_CASE("write_csv then load_csv is the identity") {
    test::TempDir dir("rt");
    const Dataset ds = test::abalone_like();
    write_csv(ds, dir / "a.csv");
    write_schema_file(ds.schema(), schema_sidecar_path(dir / "a.csv"));
    const auto back = load_csv(dir / "a.csv", read_schema_file(schema_sidecar_path(dir / "a.csv")));
    CHECK(back.dataset.values() == ds.values());
    CHECK(back.dataset.schema() == ds.schema());
    CHECK(test::read_file(dir / "a.csv").find("is_synthetic") == std::string::npos);
}

TEST_CASE("provenance column marks synthetic rows") {
    test::TempDir dir("prov");
    const Dataset ds({{"x", VariableKind::real_line(), false}, {"y", VariableKind::real_line(), true}},
                     Matrix{{1.0, 2.0}, {3.0, 4.0}});
    write_csv(ds, dir / "p.csv", std::vector<bool>{false, true});
    CHECK(test::read_file(dir / "p.csv") == "x,y,is_synthetic\n1,2,0\n3,4,1\n");
    CHECK_THROWS(write_csv(ds, dir / "q.csv", std::vector<bool>{true}));
}

TEST_CASE("abalone-like fixture matches the known Rings summary") {
    const Dataset ds = test::abalone_like();
    REQUIRE(ds.rows() == 4177);
    const auto rings = ds.target();
    CHECK(stats::mean(rings) == doctest::Approx(9.93).epsilon(0.001));
    CHECK(*std::min_element(rings.begin(), rings.end()) == 1.0);
    CHECK(*std::max_element(rings.begin(), rings.end()) == 29.0);
}

TEST_CASE("Dataset enforces supports and a single target") {
    CHECK_THROWS_AS(Dataset({{"c", VariableKind::count(), false}}, Matrix{{1.5}}), SupportError);
    CHECK_THROWS(Dataset({{"a", VariableKind::real_line(), true}, {"b", VariableKind::real_line(), true}},
                         Matrix{{1.0, 2.0}}));
    CHECK_THROWS(VariableKind::bounded(2.0, 1.0));
    CHECK(VariableKind::parse("BOUNDED,a=0,b=2") == VariableKind::bounded(0.0, 2.0));
    CHECK(VariableKind::parse(VariableKind::positive_half_line(0.5).to_string()) ==
          VariableKind::positive_half_line(0.5));
}

TEST_CASE("projection onto a support") {
    CHECK(VariableKind::count().project(21.4) == 21.0);
    CHECK(VariableKind::count().project(-0.7) == 0.0);
    CHECK(VariableKind::count().project(3.0) == 3.0);
    CHECK(VariableKind::unit_interval().project(1.2) == 1.0);
    CHECK(VariableKind::positive_half_line(2.0).project(1.5) == 2.0);
    CHECK(VariableKind::negative_half_line(-1.0).project(0.0) == -1.0);
    CHECK(VariableKind::bounded(-1.0, 1.0).project(0.25) == 0.25);
    CHECK(VariableKind::real_line().project(-1e300) == -1e300);
}
