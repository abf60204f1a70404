#include <doctest.h>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(CSI_BINARY) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string without_wall_time(const std::string& s) {
  std::string out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find('\n', pos);
    if (end == std::string::npos) end = s.size();
    std::string line = s.substr(pos, end - pos);
    if (line.find("wall_seconds") == std::string::npos) out += line + "\n";
    pos = end + 1;
  }
  return out;
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

std::string temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("diagram enumeration counts") {
  Run r0 = run("diagrams enumerate --support S1 --degree 0");
  REQUIRE(r0.code == 0);
  CHECK(parse(r0)["result"]["count"] == 1);
  Run r1 = run("diagrams enumerate --support S1 --degree 1");
  REQUIRE(r1.code == 0);
  CHECK(parse(r1)["result"]["count"] == 1);
}

TEST_CASE("classify a diagram file") {
  std::string f = temp_file("csi_tripod.diagram", "component S1: a b c\ntrivalent: t\nedges: a-t b-t c-t\n");
  Run r = run("diagrams classify " + f);
  REQUIRE(r.code == 0);
  auto j = parse(r)["result"];
  CHECK(j["degree"] == 2);
  CHECK(j["subprincipal"] == true);
  CHECK(j["faces"].get<int>() > 0);
}

TEST_CASE("gluing check passes") {
  Run r = run("algebra check-gluings --n 2 --k 3");
  CHECK(r.code == 0);
  CHECK(parse(r)["result"]["verdict"] == "PASS");
}

TEST_CASE("reduce a vector file") {
  std::string f = temp_file("csi_vector.txt",
                            "coefficient 1\ncomponent S1: a b c\ntrivalent: t\nedges: a-t b-t c-t\n");
  Run r = run("algebra reduce " + f);
  REQUIRE(r.code == 0);
  auto j = parse(r)["result"];
  CHECK(j["dimension"] == 2);
  CHECK(j["zero"] == false);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run("invariant v2 --curve /nonexistent/curve.json").code == 2);
  CHECK(run("invariant linking --curve hopf-link --samples abc").code == 2);
  CHECK(run("invariant linking --curve hopf-link --samples 1.5").code == 2);
  CHECK(run("invariant v2 --curve hopf-link --samples 1e3").code == 2);
  CHECK(run("anomaly f --gamma a9 --samples 1e3").code == 2);
  CHECK(run("no-such-command").code == 2);
  CHECK(run("invariant linking --curve hopf-link --kernel sse9 --samples 1e3").code == 2);
}

TEST_CASE("scientific sample counts") {
  Run r = run("invariant linking --curve hopf-link --samples 2e5 --seed 7");
  REQUIRE(r.code == 0);
  auto j = parse(r);
  CHECK(j["config"]["mc"]["samples"] == 200000);
  CHECK(j["result"]["nearest"] == 1);
  CHECK(j["config"]["curve"]["curve"]["components"].size() == 2);
}

TEST_CASE("reports are byte-identical apart from wall time") {
  const std::string cmd = "anomaly f --gamma a2 --samples 2e4 --seed 3 --symmetry --points 20";
  Run a = run(cmd), b = run(cmd);
  REQUIRE(a.code == 0);
  CHECK(without_wall_time(a.out) == without_wall_time(b.out));
  Run w = run(cmd + " --workers 3");
  CHECK(parse(w)["result"] == parse(a)["result"]);
  CHECK(parse(w)["config"] == parse(a)["config"]);
  Run t = run("invariant selflink --curve trefoil --samples 1e4 --format text");
  REQUIRE(t.code == 0);
  CHECK(t.out.find("result.self_linking.value = ") != std::string::npos);
  CHECK(t.out.find("wall_seconds = ") != std::string::npos);
}

TEST_CASE("framing report") {
  Run r = run("anomaly framing --curve hopf-link --samples 1e5");
  REQUIRE(r.code == 0);
  for (const auto& row : parse(r)["result"]["components"]) CHECK(row["residual"].get<double>() < 0.02);
}
