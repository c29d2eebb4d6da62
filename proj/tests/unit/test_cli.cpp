#include <doctest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "deepregex/checkpoint.hpp"
#include "deepregex/dataset_io.hpp"

using namespace deepregex;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("deepregex_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("dfa-equal exit codes") {
  auto r = run({"dfa-equal", "(a|b)", "(b|a)"});
  CHECK(r.code == 0);
  CHECK(r.out == "equal\n");

  r = run({"dfa-equal", "a", "b"});
  CHECK(r.code == 1);
  CHECK(r.out.find("not equal") == 0);

  r = run({"dfa-equal", "(a", "b"});
  CHECK(r.code == 2);
  CHECK(r.err.find("left pattern") != std::string::npos);

  r = run({"dfa-equal", "a", "[z-a]", "--json"});
  CHECK(r.code == 2);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["error"] == "parse");
  CHECK(j["side"] == "right");
}

TEST_CASE("dfa-equal json and dump") {
  TempDir dir;
  auto r = run({"dfa-equal", "a*", "(a)+", "--json", "--dump-dfa", dir / "dfa.txt"});
  CHECK(r.code == 1);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["equal"] == false);
  CHECK(j["witness"] == "");
  CHECK(j["left"] == "a*");
  auto dump = slurp(dir / "dfa.txt");
  CHECK(dump.rfind("# provenance: ", 0) == 0);
  CHECK(dump.find("# left: a*\n") != std::string::npos);
  CHECK(dump.find("# right: (a)+\n") != std::string::npos);

  r = run({"dfa-equal", "~(~(a))", "a", "--json"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["witness"].is_null());
}

TEST_CASE("usage errors") {
  auto r = run({"frobnicate"});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("dfa-equal") != std::string::npos);  // help text lists the subcommands

  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"generate", "--size", "many"}).code == cli::kExitUsage);
  CHECK(run({"generate", "--size", "10"}).code == cli::kExitUsage);  // no --out
  CHECK(run({"split", "--data", "x.jsonl", "--out-dir", "d", "--ratios", "0.5,0.5"}).code == cli::kExitUsage);
  CHECK(run({"baseline"}).code == cli::kExitUsage);

  r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("learning-curve") != std::string::npos);
  r = run({"train", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--hidden") != std::string::npos);
}

TEST_CASE("data errors") {
  TempDir dir;
  auto r = run({"split", "--data", dir / "missing.jsonl", "--out-dir", dir / "s"});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("data error") != std::string::npos);

  std::ofstream(dir / "bad.jsonl") << "{\"regex\":\"a\",\"synthetic\":\"lines a\",\"paraphrase\":null}\n{oops\n";
  r = run({"split", "--data", dir / "bad.jsonl", "--out-dir", dir / "s"});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("line 2") != std::string::npos);

  std::ofstream(dir / "junk.ckpt") << "not a checkpoint";
  r = run({"predict", "--model", dir / "junk.ckpt", "--input", dir / "bad.jsonl"});
  CHECK(r.code == cli::kExitData);
}

TEST_CASE("generate is deterministic and records provenance") {
  TempDir dir;
  REQUIRE(run({"generate", "--size", "50", "--seed", "7", "--out", dir / "a.jsonl"}).code == 0);
  REQUIRE(run({"generate", "--size", "50", "--seed", "7", "--out", dir / "a.jsonl", "--quiet"}).code == 0);
  auto first = slurp(dir / "a.jsonl");
  fs::rename(dir / "a.jsonl", dir / "first.jsonl");
  REQUIRE(run({"generate", "--size", "50", "--seed", "7", "--out", dir / "a.jsonl"}).code == 0);
  CHECK(first == slurp(dir / "a.jsonl"));
  REQUIRE(run({"generate", "--size", "50", "--seed", "8", "--out", dir / "a.jsonl"}).code == 0);
  CHECK(first != slurp(dir / "a.jsonl"));
  REQUIRE(run({"generate", "--size", "50", "--seed", "7", "--out", dir / "a.jsonl"}).code == 0);

  CHECK(read_corpus_file(dir / "a.jsonl").size() == 50);
  auto prov = nlohmann::json::parse(*read_provenance_file(dir / "a.jsonl"));
  CHECK(prov["tool"] == "deepregex");
  CHECK(prov["command"] == "generate");
  CHECK(prov["seed"] == 7);
  CHECK(prov["settings"]["size"] == 50);
  CHECK(prov["settings"]["max-depth"] == 4);
}

TEST_CASE("config file: flags win, provenance round-trips") {
  TempDir dir;
  std::ofstream(dir / "cfg.json") << R"({"seed": 5, "settings": {"size": 30, "max-depth": 3}})";
  REQUIRE(run({"generate", "--config", dir / "cfg.json", "--size", "20", "--out", dir / "a.jsonl"}).code == 0);
  auto prov = nlohmann::json::parse(*read_provenance_file(dir / "a.jsonl"));
  CHECK(prov["seed"] == 5);
  CHECK(prov["settings"]["size"] == 20);
  CHECK(prov["settings"]["max-depth"] == 3);
  CHECK(read_corpus_file(dir / "a.jsonl").size() == 20);

  // The header line of an artifact is itself a valid config.
  std::ofstream(dir / "cfg2.json") << lines_of(dir / "a.jsonl").front();
  REQUIRE(run({"generate", "--config", dir / "cfg2.json", "--out", dir / "b.jsonl"}).code == 0);
  CHECK(slurp(dir / "a.jsonl").substr(slurp(dir / "a.jsonl").find('\n')) ==
        slurp(dir / "b.jsonl").substr(slurp(dir / "b.jsonl").find('\n')));

  std::ofstream(dir / "bad.json") << R"({"settings": {"sise": 30}})";
  auto r = run({"generate", "--config", dir / "bad.json", "--out", dir / "c.jsonl"});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("sise") != std::string::npos);
  CHECK(run({"generate", "--config", dir / "nope.json", "--out", dir / "c.jsonl"}).code == cli::kExitUsage);
}

TEST_CASE("grad-check") {
  auto r = run({"grad-check", "--json"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["max_rel_error"].get<double>() < 1e-4);
  CHECK(j["tensors"].size() == 53);
  CHECK(run({"grad-check", "--vocab", "3"}).code == cli::kExitUsage);
}

TEST_CASE("pipeline: generate, split, train, predict, evaluate") {
  TempDir dir;
  REQUIRE(run({"generate", "--size", "2000", "--seed", "3", "--out", dir / "corpus.jsonl"}).code == 0);
  auto r = run({"split", "--data", dir / "corpus.jsonl", "--seed", "3", "--out-dir", dir / "split"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "train 1300  dev 200  test 500\n");

  r = run({"train", "--data", dir / "split", "--out", dir / "model.ckpt", "--hidden", "32", "--embed", "32",
           "--epochs", "2", "--seed", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("epoch 2") != std::string::npos);
  Checkpoint ck = load_checkpoint(dir / "model.ckpt");
  CHECK(ck.params.config.hidden == 32);
  CHECK(ck.history.size() == 2);
  CHECK(nlohmann::json::parse(ck.provenance)["settings"]["epochs"] == 2);

  REQUIRE(run({"predict", "--model", dir / "model.ckpt", "--input", dir / "split/test.jsonl", "--out",
               dir / "pred.jsonl"})
              .code == 0);
  CHECK(lines_of(dir / "pred.jsonl").size() == 501);

  r = run({"evaluate", "--pred", dir / "pred.jsonl", "--gold", dir / "split/test.jsonl", "--report",
           dir / "report.jsonl", "--json"});
  REQUIRE(r.code == 0);
  auto summary = nlohmann::json::parse(r.out);
  CHECK(summary["pairs"] == 500);
  CHECK(summary["dfa_equal"].get<double>() >= summary["string_equal"].get<double>());
  auto report = lines_of(dir / "report.jsonl");
  REQUIRE(report.size() == 501);
  CHECK(nlohmann::json::parse(report.back())["summary"]["pairs"] == 500);
  for (std::size_t i = 0; i + 1 < report.size(); ++i) {
    auto row = nlohmann::json::parse(report[i]);
    if (row["string_equal"] == true) CHECK(row["dfa_equal"] == true);
  }

  REQUIRE(run({"baseline", "bow-nn", "--train", dir / "split/train.jsonl", "--input", dir / "split/test.jsonl",
               "--out", dir / "bow.jsonl"})
              .code == 0);
  r = run({"evaluate", "--pred", dir / "bow.jsonl", "--gold", dir / "split/test.jsonl"});
  CHECK(r.code == 0);
  CHECK(r.out.find("DFA-Equal") != std::string::npos);

  r = run({"evaluate", "--pred", dir / "bow.jsonl", "--gold", dir / "split/dev.jsonl"});
  CHECK(r.code == cli::kExitData);
}

TEST_CASE("predict from plain text and learning curve") {
  TempDir dir;
  REQUIRE(run({"generate", "--size", "200", "--out", dir / "corpus.jsonl"}).code == 0);
  REQUIRE(run({"split", "--data", dir / "corpus.jsonl", "--out-dir", dir / "split"}).code == 0);
  REQUIRE(run({"train", "--data", dir / "split", "--out", dir / "m.ckpt", "--hidden", "16", "--embed", "16",
               "--epochs", "1", "--quiet"})
              .code == 0);
  std::ofstream(dir / "in.txt") << "lines a number\n\nlines containing a vowel\n";
  auto r = run({"predict", "--model", dir / "m.ckpt", "--input", dir / "in.txt"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  CHECK(n == 3);  // provenance + 2 predictions

  r = run({"learning-curve", "--data", dir / "split", "--sizes", "20,40", "--out", dir / "curve.tsv", "--hidden",
           "16", "--embed", "16", "--epochs", "1"});
  REQUIRE(r.code == 0);
  auto tsv = lines_of(dir / "curve.tsv");
  REQUIRE(tsv.size() == 4);
  CHECK(tsv[0].rfind("# provenance: ", 0) == 0);
  CHECK(tsv[1] == "train_size\tstring_equal\tdfa_equal\tbest_epoch\terror");
  CHECK(tsv[2].rfind("20\t", 0) == 0);
  CHECK(tsv[3].rfind("40\t", 0) == 0);

  CHECK(run({"learning-curve", "--data", dir / "split", "--sizes", "40,20", "--out", dir / "c.tsv"}).code ==
        cli::kExitUsage);
}
