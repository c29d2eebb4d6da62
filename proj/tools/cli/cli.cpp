#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <memory>
#include <ostream>
#include <sstream>

#include "deepregex/automata.hpp"
#include "deepregex/baselines.hpp"
#include "deepregex/checkpoint.hpp"
#include "deepregex/corpus.hpp"
#include "deepregex/dataset_io.hpp"
#include "deepregex/eval.hpp"
#include "deepregex/model.hpp"
#include "deepregex/version.hpp"

namespace deepregex::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename... Args>
std::string format(const char* fmt, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

/// Options of one subcommand that can come from a config file and are
/// recorded in provenance.
class Settings {
 public:
  template <typename T>
  CLI::Option* option(CLI::App* app, const std::string& name, T& var, const std::string& help) {
    return add(name, app->add_option("--" + name, var, help)->capture_default_str(), var);
  }

  template <typename T>
  CLI::Option* positional(CLI::App* app, const std::string& name, T& var, const std::string& help) {
    return add(name, app->add_option(name, var, help), var);
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& help) {
    return add(name, app->add_flag("--" + name, var, help), var);
  }

  /// Fills every setting that was not given on the command line.
  void merge(const ordered_json& settings) const {
    if (!settings.is_object()) throw UsageError("config: \"settings\" must be an object");
    for (const auto& [key, value] : settings.items()) {
      auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.name == key; });
      if (it == entries_.end()) throw UsageError("config: unknown setting \"" + key + "\"");
      if (it->opt->count() > 0) continue;
      try {
        it->load(value);
      } catch (const nlohmann::json::exception& e) {
        throw UsageError("config: setting \"" + key + "\": " + e.what());
      }
    }
  }

  ordered_json dump() const {
    ordered_json out = ordered_json::object();
    for (const auto& e : entries_) out[e.name] = e.save();
    return out;
  }

 private:
  struct Entry {
    std::string name;
    CLI::Option* opt;
    std::function<void(const ordered_json&)> load;
    std::function<ordered_json()> save;
  };

  template <typename T>
  CLI::Option* add(const std::string& name, CLI::Option* opt, T& var) {
    entries_.push_back({name, opt, [&var](const ordered_json& j) { var = j.get<T>(); },
                        [&var] { return ordered_json(var); }});
    return opt;
  }

  std::vector<Entry> entries_;
};

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  Settings settings;
  std::uint64_t seed = 1;
  CLI::Option* seed_option = nullptr;
  std::string config;
  bool quiet = false;
  std::function<int(Command&, std::ostream&, std::ostream&)> body;

  ordered_json provenance() const {
    ordered_json p;
    p["tool"] = "deepregex";
    p["version"] = kVersion;
    p["command"] = name;
    p["seed"] = seed;
    p["settings"] = settings.dump();
    return p;
  }

  void load_config() {
    if (config.empty()) return;
    std::ifstream in(config);
    if (!in) throw UsageError("cannot open config " + config);
    ordered_json j;
    try {
      j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config " + config + ": " + e.what());
    }
    if (j.is_object() && j.contains("provenance")) j = j["provenance"];
    if (!j.is_object()) throw UsageError("config " + config + ": expected a JSON object");
    if (j.contains("seed") && seed_option->count() == 0) {
      try {
        seed = j["seed"].get<std::uint64_t>();
      } catch (const nlohmann::json::exception& e) {
        throw UsageError("config: seed: " + std::string(e.what()));
      }
    }
    if (j.contains("settings")) settings.merge(j["settings"]);
  }

  void progress(std::ostream& err, const std::string& line) const {
    if (!quiet) err << line << '\n' << std::flush;
  }
};

void require(const std::string& value, const std::string& flag) {
  if (value.empty()) throw UsageError(flag + " is required");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

std::array<double, 3> parse_ratios(const std::string& text) {
  auto parts = split_list(text);
  if (parts.size() != 3) throw UsageError("--ratios needs three comma-separated values");
  std::array<double, 3> r{};
  for (int i = 0; i < 3; ++i) {
    try {
      std::size_t used = 0;
      r[i] = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      throw UsageError("--ratios: not a number: " + parts[i]);
    }
  }
  return r;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  for (const auto& p : split_list(text)) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(p, &used);
      if (used != p.size() || v <= 0) throw std::invalid_argument(p);
      sizes.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("--sizes: not a positive integer: " + p);
    }
  }
  if (sizes.empty()) throw UsageError("--sizes is empty");
  return sizes;
}

std::vector<std::string> read_descriptions(const std::string& path, std::string format, const std::string& field) {
  if (format == "auto") format = fs::path(path).extension() == ".jsonl" ? "jsonl" : "text";
  std::vector<std::string> out;
  if (format == "text") {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    while (std::getline(in, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
    return out;
  }
  if (format != "jsonl") throw UsageError("--format must be auto, jsonl or text");
  Corpus corpus = read_corpus_file(path);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (field == "synthetic") {
      out.push_back(corpus[i].synthetic);
    } else if (field == "paraphrase") {
      if (!corpus[i].paraphrase) throw DataError(path + ": record " + std::to_string(i + 1) + " has no paraphrase");
      out.push_back(*corpus[i].paraphrase);
    } else {
      throw UsageError("--field must be synthetic or paraphrase");
    }
  }
  return out;
}

void write_predictions(std::ostream& out, const ordered_json& provenance, const std::vector<std::string>& descriptions,
                       const std::vector<std::string>& predictions) {
  out << ordered_json{{"provenance", provenance}}.dump() << '\n';
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    ordered_json row;
    row["description"] = descriptions[i];
    row["prediction"] = predictions[i];
    out << row.dump() << '\n';
  }
}

void emit_predictions(const std::string& path, std::ostream& stdout_stream, const ordered_json& provenance,
                      const std::vector<std::string>& descriptions, const std::vector<std::string>& predictions) {
  if (path.empty()) {
    write_predictions(stdout_stream, provenance, descriptions, predictions);
    return;
  }
  auto file = open_out(path);
  write_predictions(file, provenance, descriptions, predictions);
  if (!file) throw DataError("write failed for " + path);
}

std::vector<std::string> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json row;
    try {
      row = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DatasetError(std::string("malformed JSON: ") + e.what(), number, path);
    }
    if (!row.is_object()) throw DatasetError("record must be a JSON object", number, path);
    if (row.contains("provenance") && !row.contains("prediction")) continue;
    auto it = row.find("prediction");
    if (it == row.end() || !it->is_string()) throw DatasetError("missing string \"prediction\"", number, path);
    out.push_back(it->get<std::string>());
  }
  return out;
}

struct NetOptions {
  ModelConfig model;
  TrainConfig train;

  void add(CLI::App* app, Settings& s) {
    s.option(app, "embed", model.embed, "Embedding size");
    s.option(app, "hidden", model.hidden, "LSTM hidden size");
    s.option(app, "layers", model.layers, "LSTM layers per side");
    s.option(app, "dropout", model.dropout, "Dropout after every LSTM layer");
    s.option(app, "max-decode-len", model.max_decode_len, "Longest decoded regex");
    s.option(app, "epochs", train.epochs, "Training epochs");
    s.option(app, "batch", train.batch, "Minibatch size");
    s.option(app, "lr", train.lr, "Initial SGD learning rate");
    s.option(app, "decay", train.decay, "Learning-rate decay factor");
    s.option(app, "clip", train.clip, "Global gradient-norm clip");
  }
};

void load_split_dir(const std::string& dir, Corpus* train, Corpus* dev, Corpus* test) {
  fs::path d(dir);
  if (train) *train = read_corpus_file(d / "train.jsonl");
  if (dev) *dev = read_corpus_file(d / "dev.jsonl");
  if (test) *test = read_corpus_file(d / "test.jsonl");
}

std::string epoch_line(const EpochRecord& r) {
  return format("epoch %d  loss %.4f  dev-ppl %.4f  lr %.4g%s", r.epoch, r.train_loss, r.dev_perplexity, r.lr,
                r.improved ? "  *" : "");
}

int classify(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e)) return kExitUsage;
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const DatasetError*>(&e) ||
      dynamic_cast<const CheckpointError*>(&e) || dynamic_cast<const CorpusError*>(&e) ||
      dynamic_cast<const RegexError*>(&e) || dynamic_cast<const BudgetExceededError*>(&e) ||
      dynamic_cast<const fs::filesystem_error*>(&e))
    return kExitData;
  return kExitInternal;
}

const char* exit_label(int code) {
  switch (code) {
    case kExitUsage:
      return "usage";
    case kExitData:
      return "data";
    default:
      return "internal";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Natural language to regular expression toolkit", "deepregex"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::vector<std::unique_ptr<Command>> commands;
  auto command = [&](CLI::App* parent, const std::string& name, const std::string& help) -> Command& {
    auto c = std::make_unique<Command>();
    c->name = name;
    c->app = parent->add_subcommand(name, help);
    c->seed_option = c->app->add_option("--seed", c->seed, "Seed for every stochastic step")->capture_default_str();
    c->app->add_option("--config", c->config, "JSON config; same schema as an artifact's provenance block");
    c->app->add_flag("--quiet", c->quiet, "No progress output");
    commands.push_back(std::move(c));
    return *commands.back();
  };

  // generate
  struct {
    std::size_t size = 10000;
    int max_depth = 4;
    int min_count = 1;
    int max_count = 9;
    std::string out;
  } gen;
  {
    Command& c = command(&app, "generate", "Sample (regex, description) pairs from the grammar");
    c.settings.option(c.app, "size", gen.size, "Number of distinct pairs");
    c.settings.option(c.app, "max-depth", gen.max_depth, "Derivation depth limit");
    c.settings.option(c.app, "min-count", gen.min_count, "Smallest repetition count N");
    c.settings.option(c.app, "max-count", gen.max_count, "Largest repetition count N");
    c.settings.option(c.app, "out", gen.out, "Output JSONL path");
    c.body = [&gen](Command& c, std::ostream& out, std::ostream&) {
      require(gen.out, "--out");
      GeneratorConfig g;
      g.seed = c.seed;
      g.target_size = gen.size;
      g.max_depth = gen.max_depth;
      g.min_count = gen.min_count;
      g.max_count = gen.max_count;
      Corpus corpus = generate_corpus(g);
      write_corpus_file(gen.out, corpus, c.provenance().dump());
      out << "wrote " << corpus.size() << " pairs to " << gen.out << '\n';
      return kExitOk;
    };
  }

  // split
  struct {
    std::string data;
    std::string ratios = "0.65,0.10,0.25";
    std::string out_dir;
  } spl;
  {
    Command& c = command(&app, "split", "Shuffle a corpus into train/dev/test files");
    c.settings.option(c.app, "data", spl.data, "Input corpus (JSONL)");
    c.settings.option(c.app, "ratios", spl.ratios, "train,dev,test fractions");
    c.settings.option(c.app, "out-dir", spl.out_dir, "Directory for train.jsonl, dev.jsonl, test.jsonl");
    c.body = [&spl](Command& c, std::ostream& out, std::ostream&) {
      require(spl.data, "--data");
      require(spl.out_dir, "--out-dir");
      auto ratios = parse_ratios(spl.ratios);
      CorpusSplit s = split_corpus(read_corpus_file(spl.data), ratios, c.seed);
      fs::create_directories(spl.out_dir);
      std::string prov = c.provenance().dump();
      fs::path dir(spl.out_dir);
      write_corpus_file(dir / "train.jsonl", s.train, prov);
      write_corpus_file(dir / "dev.jsonl", s.dev, prov);
      write_corpus_file(dir / "test.jsonl", s.test, prov);
      out << "train " << s.train.size() << "  dev " << s.dev.size() << "  test " << s.test.size() << '\n';
      return kExitOk;
    };
  }

  // train
  struct {
    std::string data;
    std::string out;
    NetOptions net;
  } trn;
  {
    Command& c = command(&app, "train", "Train the attention seq2seq model");
    c.settings.option(c.app, "data", trn.data, "Split directory with train.jsonl and dev.jsonl");
    c.settings.option(c.app, "out", trn.out, "Checkpoint path");
    trn.net.add(c.app, c.settings);
    c.body = [&trn](Command& c, std::ostream& out, std::ostream& err) {
      require(trn.data, "--data");
      require(trn.out, "--out");
      Corpus train_set, dev_set;
      load_split_dir(trn.data, &train_set, &dev_set, nullptr);
      TrainConfig tc = trn.net.train;
      tc.seed = c.seed;
      Checkpoint ck = fit(train_set, dev_set, trn.net.model, tc, [&](const EpochRecord& r, const ModelParams<float>&) {
        c.progress(err, epoch_line(r));
        return true;
      });
      ck.provenance = c.provenance().dump();
      save_checkpoint(trn.out, ck);
      out << "best epoch " << ck.best_epoch << "; wrote " << trn.out << '\n';
      return kExitOk;
    };
  }

  // predict
  struct {
    std::string model;
    std::string input;
    std::string out;
    std::string field = "synthetic";
    std::string format = "auto";
  } prd;
  {
    Command& c = command(&app, "predict", "Translate descriptions with a trained model");
    c.settings.option(c.app, "model", prd.model, "Checkpoint path");
    c.settings.option(c.app, "input", prd.input, "Descriptions: corpus JSONL or one per line");
    c.settings.option(c.app, "out", prd.out, "Predictions JSONL (stdout if omitted)");
    c.settings.option(c.app, "field", prd.field, "Corpus field to translate: synthetic or paraphrase");
    c.settings.option(c.app, "format", prd.format, "Input format: auto, jsonl or text");
    c.body = [&prd](Command& c, std::ostream& out, std::ostream&) {
      require(prd.model, "--model");
      require(prd.input, "--input");
      Checkpoint ck = load_checkpoint(prd.model);
      auto descriptions = read_descriptions(prd.input, prd.format, prd.field);
      emit_predictions(prd.out, out, c.provenance(), descriptions, predict(ck, descriptions));
      return kExitOk;
    };
  }

  // baseline bow-nn
  struct {
    std::string train;
    std::string input;
    std::string out;
    std::string field = "synthetic";
    std::string format = "auto";
  } bow;
  {
    CLI::App* baseline = app.add_subcommand("baseline", "Non-neural baselines");
    baseline->require_subcommand(1);
    Command& c = command(baseline, "bow-nn", "Nearest training description by bag-of-words cosine");
    c.settings.option(c.app, "train", bow.train, "Training corpus (JSONL)");
    c.settings.option(c.app, "input", bow.input, "Descriptions: corpus JSONL or one per line");
    c.settings.option(c.app, "out", bow.out, "Predictions JSONL (stdout if omitted)");
    c.settings.option(c.app, "field", bow.field, "Corpus field to match: synthetic or paraphrase");
    c.settings.option(c.app, "format", bow.format, "Input format: auto, jsonl or text");
    c.body = [&bow](Command& c, std::ostream& out, std::ostream&) {
      require(bow.train, "--train");
      require(bow.input, "--input");
      BowNearestNeighbor nn(read_corpus_file(bow.train));
      auto descriptions = read_descriptions(bow.input, bow.format, bow.field);
      std::vector<std::string> predictions;
      predictions.reserve(descriptions.size());
      for (const auto& d : descriptions) predictions.push_back(nn.predict(d));
      emit_predictions(bow.out, out, c.provenance(), descriptions, predictions);
      return kExitOk;
    };
  }

  // evaluate
  struct {
    std::string pred;
    std::string gold;
    std::string report;
    double budget = 5.0;
    std::size_t max_states = 1'000'000;
    bool json = false;
  } evl;
  {
    Command& c = command(&app, "evaluate", "Score predictions by String-Equal and DFA-Equal");
    c.settings.option(c.app, "pred", evl.pred, "Predictions JSONL");
    c.settings.option(c.app, "gold", evl.gold, "Gold corpus JSONL");
    c.settings.option(c.app, "report", evl.report, "Report path: one JSON row per pair, then a summary");
    c.settings.option(c.app, "budget", evl.budget, "Seconds per DFA-Equal check");
    c.settings.option(c.app, "max-states", evl.max_states, "State limit per DFA-Equal check");
    c.settings.flag(c.app, "json", evl.json, "Print the summary as JSON");
    c.body = [&evl](Command& c, std::ostream& out, std::ostream&) {
      require(evl.pred, "--pred");
      require(evl.gold, "--gold");
      auto predictions = read_predictions(evl.pred);
      std::vector<std::string> golds;
      for (const auto& ex : read_corpus_file(evl.gold)) golds.push_back(ex.regex);
      if (predictions.size() != golds.size()) {
        throw DataError(std::to_string(predictions.size()) + " predictions for " + std::to_string(golds.size()) +
                        " gold pairs");
      }
      EvalOptions options;
      options.budget_seconds = evl.budget;
      options.max_states = evl.max_states;
      EvalReport report = evaluate(predictions, golds, options);

      ordered_json summary;
      summary["pairs"] = report.rows.size();
      summary["string_equal"] = std::stod(format_percent(report.string_equal_accuracy));
      summary["dfa_equal"] = std::stod(format_percent(report.dfa_equal_accuracy));
      summary["provenance"] = c.provenance();
      if (!evl.report.empty()) {
        auto file = open_out(evl.report);
        for (const auto& r : report.rows) {
          ordered_json row;
          row["gold"] = r.gold;
          row["predicted"] = r.predicted;
          row["string_equal"] = r.string_equal;
          row["dfa_equal"] = r.dfa_equal;
          row["note"] = r.note;
          file << row.dump() << '\n';
        }
        file << ordered_json{{"summary", summary}}.dump() << '\n';
        if (!file) throw DataError("write failed for " + evl.report);
      }
      if (evl.json) {
        out << summary.dump() << '\n';
      } else {
        out << "pairs         " << report.rows.size() << '\n'
            << "String-Equal  " << format_percent(report.string_equal_accuracy) << "%\n"
            << "DFA-Equal     " << format_percent(report.dfa_equal_accuracy) << "%\n";
      }
      return kExitOk;
    };
  }

  // dfa-equal
  struct {
    std::string left;
    std::string right;
    std::string dump;
    double budget = 5.0;
    bool json = false;
  } deq;
  {
    Command& c = command(&app, "dfa-equal", "Decide whether two regexes denote the same language");
    c.settings.positional(c.app, "left", deq.left, "First regex");
    c.settings.positional(c.app, "right", deq.right, "Second regex");
    c.settings.option(c.app, "dump-dfa", deq.dump, "Write both minimal DFAs as transition tables");
    c.settings.option(c.app, "budget", deq.budget, "Seconds before giving up (0 = no limit)");
    c.settings.flag(c.app, "json", deq.json, "Machine-readable output");
    c.body = [&deq](Command& c, std::ostream& out, std::ostream& err) {
      Budget budget;
      if (deq.budget > 0) budget = Budget::within(std::chrono::milliseconds(static_cast<long long>(deq.budget * 1000)));
      Equivalence eq;
      try {
        eq = check_equivalence(deq.left, deq.right, budget);
      } catch (const DfaEqualParseError& e) {
        if (deq.json) {
          ordered_json j;
          j["error"] = "parse";
          j["side"] = e.side() == Side::Left ? "left" : "right";
          j["message"] = e.what();
          out << j.dump() << '\n';
        }
        err << "deepregex dfa-equal: " << e.what() << '\n';
        return 2;
      }
      if (!deq.dump.empty()) {
        auto file = open_out(deq.dump);
        file << "# provenance: " << c.provenance().dump() << '\n';
        file << "# left: " << deq.left << '\n';
        dump_dfa(file, eq.left, eq.alphabet);
        file << "# right: " << deq.right << '\n';
        dump_dfa(file, eq.right, eq.alphabet);
        if (!file) throw DataError("write failed for " + deq.dump);
      }
      if (deq.json) {
        ordered_json j;
        j["equal"] = eq.equal;
        j["left"] = deq.left;
        j["right"] = deq.right;
        j["witness"] = eq.equal ? ordered_json(nullptr) : ordered_json(eq.witness);
        j["alphabet_size"] = eq.alphabet.size();
        j["states"] = {{"left", eq.left.state_count}, {"right", eq.right.state_count}};
        out << j.dump() << '\n';
      } else if (eq.equal) {
        out << "equal\n";
      } else {
        out << "not equal; witness " << ordered_json(eq.witness).dump() << '\n';
      }
      return eq.equal ? 0 : 1;
    };
  }

  // grad-check
  struct {
    int embed = 8;
    int hidden = 8;
    int layers = 2;
    int vocab = 12;
    double step = 1e-5;
    double tolerance = 1e-4;
    bool json = false;
  } grd;
  {
    Command& c = command(&app, "grad-check", "Compare analytic and finite-difference gradients on a tiny model");
    c.settings.option(c.app, "embed", grd.embed, "Embedding size");
    c.settings.option(c.app, "hidden", grd.hidden, "LSTM hidden size");
    c.settings.option(c.app, "layers", grd.layers, "LSTM layers per side");
    c.settings.option(c.app, "vocab", grd.vocab, "Source and target vocabulary size, reserved ids included");
    c.settings.option(c.app, "step", grd.step, "Central-difference step");
    c.settings.option(c.app, "tolerance", grd.tolerance, "Largest accepted relative error");
    c.settings.flag(c.app, "json", grd.json, "Machine-readable output");
    c.body = [&grd](Command& c, std::ostream& out, std::ostream&) {
      ModelConfig mc;
      mc.embed = grd.embed;
      mc.hidden = grd.hidden;
      mc.layers = grd.layers;
      mc.src_vocab = grd.vocab;
      mc.tgt_vocab = grd.vocab;
      mc.dropout = 0;
      if (grd.vocab <= Vocab::kReserved) throw UsageError("--vocab must exceed " + std::to_string(Vocab::kReserved));
      GradCheckReport report = gradient_check(mc, c.seed, grd.step);
      bool pass = report.max_rel_error < grd.tolerance;
      if (grd.json) {
        ordered_json j;
        j["max_rel_error"] = report.max_rel_error;
        j["tolerance"] = grd.tolerance;
        j["pass"] = pass;
        j["tensors"] = ordered_json::array();
        for (const auto& t : report.tensors)
          j["tensors"].push_back({{"name", t.name}, {"count", t.count}, {"max_rel_error", t.max_rel_error}});
        out << j.dump() << '\n';
      } else {
        for (const auto& t : report.tensors)
          out << format("%-12s %6zu  %.3e\n", t.name.c_str(), t.count, t.max_rel_error);
        out << format("max relative error %.3e (tolerance %.1e): %s\n", report.max_rel_error, grd.tolerance,
                      pass ? "pass" : "FAIL");
      }
      return pass ? 0 : 1;
    };
  }

  // learning-curve
  struct {
    std::string data;
    std::string sizes = "250,500,1000,2000";
    std::string out;
    double budget = 5.0;
    NetOptions net;
  } crv;
  {
    Command& c = command(&app, "learning-curve", "Test accuracy as a function of training-set size");
    c.settings.option(c.app, "data", crv.data, "Split directory with train/dev/test.jsonl");
    c.settings.option(c.app, "sizes", crv.sizes, "Ascending training-set sizes");
    c.settings.option(c.app, "out", crv.out, "Tab-separated output table");
    c.settings.option(c.app, "budget", crv.budget, "Seconds per DFA-Equal check");
    crv.net.add(c.app, c.settings);
    c.body = [&crv](Command& c, std::ostream& out, std::ostream& err) {
      require(crv.data, "--data");
      require(crv.out, "--out");
      auto sizes = parse_sizes(crv.sizes);
      CorpusSplit split;
      load_split_dir(crv.data, &split.train, &split.dev, &split.test);
      TrainConfig tc = crv.net.train;
      tc.seed = c.seed;
      EvalOptions options;
      options.budget_seconds = crv.budget;
      auto rows = learning_curve(split, sizes, crv.net.model, tc, options, [&](const LearningCurveRow& r) {
        c.progress(err, "size " + std::to_string(r.train_size) + "  string-equal " + format_percent(r.string_equal) +
                            "  dfa-equal " + format_percent(r.dfa_equal) + (r.error.empty() ? "" : "  " + r.error));
      });
      auto file = open_out(crv.out);
      file << "# provenance: " << c.provenance().dump() << '\n';
      file << "train_size\tstring_equal\tdfa_equal\tbest_epoch\terror\n";
      for (const auto& r : rows) {
        file << r.train_size << '\t' << format_percent(r.string_equal) << '\t' << format_percent(r.dfa_equal) << '\t'
             << r.best_epoch << '\t' << r.error << '\n';
      }
      if (!file) throw DataError("write failed for " + crv.out);
      out << "wrote " << rows.size() << " rows to " << crv.out << '\n';
      return kExitOk;
    };
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUsage;
  }

  for (auto& c : commands) {
    if (!c->app->parsed()) continue;
    try {
      c->load_config();
      return c->body(*c, out, err);
    } catch (const std::exception& e) {
      int code = classify(e);
      err << "deepregex " << c->name << ": " << exit_label(code) << " error: " << e.what() << '\n';
      return code;
    }
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace deepregex::cli
