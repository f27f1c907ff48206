#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mdpd/uncertainty.hpp"
#include "mdpd_cli/cli.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using namespace mdpd;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "mdpd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / ("mdpd_cli_" + name); }

std::string write_file(const std::string& name, const std::string& text) {
  const auto p = temp(name);
  std::ofstream(p) << text;
  return p.string();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("fit emits JSON with the MLE") {
  const auto input = write_file("s.csv", "year,value\n1,1\n2,2\n3,3\n");
  const auto r = call({"fit", "--family", "exponential", "--alpha", "0", "--input", input, "--column", "value"});
  REQUIRE(r.status == 0);
  CHECK_THAT(r.out, ContainsSubstring("\"lambda\":0.5"));
  CHECK_THAT(r.out, ContainsSubstring("\"converged\":true"));
  const auto csv = call({"fit", "-f", "exp", "-a", "0", "-i", input, "--format", "csv"});
  CHECK(lines(csv.out).at(0) == "param,estimate,se");
}

TEST_CASE("fit writes plot data") {
  const auto input = write_file("p.csv", "value\n1\n2\n3\n5\n8\n");
  const auto plot = temp("plot.csv").string();
  const auto r = call({"fit", "-f", "gamma", "-a", "0.2", "-i", input, "--plot-data", plot, "--bins", "4"});
  REQUIRE(r.status == 0);
  std::ifstream in(plot);
  std::string first;
  std::getline(in, first);
  CHECK(first == "bin_left,bin_right,density");
}

TEST_CASE("are-table reproduces the exponential row") {
  const auto r = call({"are-table", "--family", "exponential"});
  REQUIRE(r.status == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 8);
  CHECK(l[0] == "alpha,param,are");
  CHECK(l[1].rfind("0.1,lambda,", 0) == 0);
  CHECK_THAT(std::stod(l[1].substr(11)), WithinAbs(0.97, 0.005));
  CHECK(call({"are-table", "-f", "gamma"}).status == 1);
  CHECK(call({"are-table", "-f", "gamma", "--theta", "5,0.05", "--alphas", "0.5"}).status == 0);
}

TEST_CASE("simulate is deterministic and needs a seed") {
  const auto a = call({"simulate", "-f", "weibull", "--theta", "2,0.01", "--seed", "4", "-n", "20", "--epsilon", "0.1", "--point", "900"});
  const auto b = call({"simulate", "-f", "weibull", "--theta", "2,0.01", "--seed", "4", "-n", "20", "--epsilon", "0.1", "--point", "900"});
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 21);
  CHECK(lines(a.out)[0] == "index,value");
  const auto c = call({"simulate", "-f", "weibull", "--theta", "2,0.01"});
  CHECK(c.status == 1);
  CHECK_THAT(c.err, ContainsSubstring("\"kind\":\"usage\""));
}

TEST_CASE("tune, select, influence and bootstrap run") {
  const auto sim = call({"simulate", "-f", "lognormal", "--theta", "1,0.5", "--seed", "2", "-n", "40"});
  const auto input = write_file("ln.csv", sim.out);
  const auto curve = temp("curve.csv").string();
  const auto t = call({"tune", "-f", "lognormal", "-i", input, "--fast", "--curve", curve});
  REQUIRE(t.status == 0);
  CHECK_THAT(t.out, ContainsSubstring("\"alpha_star\""));
  CHECK(std::filesystem::file_size(curve) > 0);
  const auto ric = temp("ric.csv").string();
  const auto s = call({"select", "-i", input, "--fast", "--ric-table", ric});
  REQUIRE(s.status == 0);
  CHECK_THAT(s.out, ContainsSubstring("\"winner\""));
  const auto inf = call({"influence", "-f", "gamma", "--theta", "5,1", "-a", "0.5", "--points", "10"});
  REQUIRE(inf.status == 0);
  CHECK(lines(inf.out)[0] == "y,if_a,if_b,norm");
  const auto reps = temp("reps.csv").string();
  const auto bs = call({"bootstrap", "-f", "lognormal", "-i", input, "-B", "50", "-s", "3", "--replicates", reps});
  REQUIRE(bs.status == 0);
  CHECK_THAT(bs.out, ContainsSubstring("\"se_bootstrap\""));
  CHECK_THAT(bs.out, ContainsSubstring("\"se_asymptotic\""));
}

TEST_CASE("exit statuses and machine-readable errors") {
  auto r = call({"fit", "-i", "x.csv"});
  CHECK(r.status == 1);
  r = call({"bogus"});
  CHECK(r.status == 1);
  CHECK(lines(r.err).size() == 1);
  r = call({"fit", "-f", "beta", "-i", "x.csv"});
  CHECK(r.status == 1);
  const auto neg = write_file("neg.csv", "value\n1\n-2\n");
  r = call({"fit", "-f", "exponential", "-a", "0", "-i", neg});
  CHECK(r.status == 2);
  CHECK(lines(r.err).size() == 1);
  CHECK_THAT(r.err, ContainsSubstring("\"row\":2"));
  r = call({"fit", "-f", "exponential", "-i", "/nonexistent.csv"});
  CHECK(r.status == 2);
  r = call({"fit", "-f", "exponential", "-a", "2", "-i", neg});
  CHECK(r.status == 1);
  CHECK(call({"--help"}).status == 0);
  CHECK(call({"report", "--help"}).status == 0);
}

TEST_CASE("the binary reports exit statuses") {
  const std::string bin = MDPD_CLI_BINARY;
  CHECK(std::system((bin + " are-table -f exponential > /dev/null").c_str()) == 0);
  const int status = std::system((bin + " fit -f exponential -i /nonexistent.csv 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 2);
}

TEST_CASE("report over a synthetic panel") {
  const std::vector<ParamVector> truth{ParamVector::exponential(0.02), ParamVector::gamma(8, 0.1),
                                       ParamVector::lognormal(4, 0.8), ParamVector::weibull(3, 0.01)};
  const std::size_t n = 150;
  std::vector<Sample> cols;
  for (std::size_t k = 0; k < truth.size(); ++k) cols.push_back(sample_family(truth[k], n, 60 + k));
  std::ostringstream panel;
  panel << "year,exp_series,gamma_series,lnorm_series,weib_series,broken\n";
  for (std::size_t i = 0; i < n; ++i) {
    panel << 1900 + i;
    for (const auto& c : cols) panel << ',' << (i % 25 == 0 ? 0.0 : c[i]);
    panel << ',' << (i == 3 ? "oops" : "1") << '\n';
  }
  const auto input = write_file("panel.csv", panel.str());
  const auto r = call({"report", "-i", input, "--fast"});
  REQUIRE(r.status == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 5);

  std::ifstream golden(std::string(MDPD_GOLDEN_DIR) + "/report_header.csv");
  std::string header;
  std::getline(golden, header);
  CHECK(l[0] == header);
  CHECK(l[0] == cli::kReportHeader);

  const std::vector<std::string> labels{"exp_series", "gamma_series", "lnorm_series", "weib_series"};
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(l[k + 1].rfind(labels[k] + ",", 0) == 0);
    std::size_t commas = std::count(l[k + 1].begin(), l[k + 1].end(), ',');
    CHECK(commas == 9);
    const auto sel = call({"select", "-i", input, "--column", labels[k], "--fast"});
    REQUIRE(sel.status == 0);
    const std::string winner = sel.out.substr(sel.out.find("\"winner\""));
    const std::string family = l[k + 1].substr(labels[k].size() + 1, l[k + 1].find(',', labels[k].size() + 1) - labels[k].size() - 1);
    CHECK(winner.rfind("\"winner\":\"" + family + "\"", 0) == 0);
  }
  CHECK(l[3].find(",lognormal,") != std::string::npos);
  CHECK(l[4].find(",weibull,") != std::string::npos);
  CHECK_THAT(r.err, ContainsSubstring("\"series\":\"broken\""));
}
