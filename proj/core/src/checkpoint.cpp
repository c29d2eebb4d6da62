#include "deepregex/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <zlib.h>

#include "json.hpp"

namespace deepregex {

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'D', 'R', 'X', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint8_t kF32 = 1;
constexpr std::uint8_t kF64 = 2;

using ordered_json = nlohmann::ordered_json;

std::uint32_t crc(const char* data, std::size_t n) {
  uLong c = crc32(0L, Z_NULL, 0);
  while (n > 0) {
    auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    c = crc32(c, reinterpret_cast<const Bytef*>(data), chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(c);
}

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    T v;
    std::memcpy(&v, take(sizeof(T)), sizeof(T));
    return v;
  }
  const char* take(std::size_t n) {
    if (n > bytes_.size() - pos_) throw CheckpointCorruptError("checkpoint is truncated");
    const char* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }
  const char* at(std::size_t p) const { return bytes_.data() + p; }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

ordered_json model_json(const ModelConfig& c) {
  return {{"src_vocab", c.src_vocab}, {"tgt_vocab", c.tgt_vocab}, {"embed", c.embed},
          {"hidden", c.hidden},       {"layers", c.layers},       {"dropout", c.dropout},
          {"max_decode_len", c.max_decode_len}};
}

ordered_json train_json(const TrainConfig& c) {
  return {{"epochs", c.epochs}, {"batch", c.batch}, {"lr", c.lr},
          {"decay", c.decay},   {"clip", c.clip},   {"seed", c.seed}};
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ck) {
  const ModelConfig& mc = ck.params.config;
  ordered_json meta;
  meta["format"] = "deepregex-checkpoint";
  meta["model"] = model_json(mc);
  meta["train"] = train_json(ck.train);
  meta["source_vocab"] = ck.source.tokens();
  meta["target_vocab"] = ck.target.tokens();
  meta["best_epoch"] = ck.best_epoch;
  ordered_json hist = ordered_json::array();
  for (const auto& r : ck.history) {
    hist.push_back({{"epoch", r.epoch}, {"train_loss", r.train_loss}, {"dev_perplexity", r.dev_perplexity},
                    {"lr", r.lr}, {"improved", r.improved}});
  }
  meta["history"] = hist;
  meta["provenance"] = ordered_json::parse(ck.provenance);
  std::string meta_text = meta.dump();

  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, meta_text.size());
  out += meta_text;
  put<std::uint32_t>(out, crc(meta_text.data(), meta_text.size()));

  auto layout = tensor_layout(mc);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(layout.size()));
  for (const auto& slot : layout) {
    std::size_t start = out.size();
    put<std::uint32_t>(out, static_cast<std::uint32_t>(slot.name.size()));
    out += slot.name;
    put<std::uint8_t>(out, kF32);
    put<std::uint32_t>(out, 2);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(slot.rows));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(slot.cols));
    auto block = ck.params.block(slot);
    for (Eigen::Index i = 0; i < slot.rows; ++i)
      for (Eigen::Index j = 0; j < slot.cols; ++j) put<float>(out, block(i, j));
    put<std::uint32_t>(out, crc(out.data() + start, out.size() - start));
  }
  return out;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  std::string bytes = serialize_checkpoint(ck);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("write failed for " + path.string());
}

Checkpoint parse_checkpoint(const std::string& bytes) {
  Reader r(bytes);
  if (bytes.size() < sizeof(kMagic) || std::memcmp(r.take(sizeof(kMagic)), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointCorruptError("not a deepregex checkpoint (bad magic)");
  }
  auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw CheckpointVersionError("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                                 std::to_string(kCheckpointVersion) + ")");
  }
  auto meta_len = r.get<std::uint64_t>();
  if (meta_len > bytes.size()) throw CheckpointCorruptError("checkpoint is truncated");
  const char* meta_ptr = r.take(meta_len);
  std::string meta_text(meta_ptr, meta_len);
  if (r.get<std::uint32_t>() != crc(meta_ptr, meta_len)) throw CheckpointCorruptError("metadata checksum mismatch");

  Checkpoint ck;
  ModelConfig mc;
  try {
    auto meta = nlohmann::json::parse(meta_text);
    const auto& m = meta.at("model");
    mc.src_vocab = m.at("src_vocab").get<int>();
    mc.tgt_vocab = m.at("tgt_vocab").get<int>();
    mc.embed = m.at("embed").get<int>();
    mc.hidden = m.at("hidden").get<int>();
    mc.layers = m.at("layers").get<int>();
    mc.dropout = m.at("dropout").get<double>();
    mc.max_decode_len = m.at("max_decode_len").get<int>();
    const auto& t = meta.at("train");
    ck.train.epochs = t.at("epochs").get<int>();
    ck.train.batch = t.at("batch").get<int>();
    ck.train.lr = t.at("lr").get<double>();
    ck.train.decay = t.at("decay").get<double>();
    ck.train.clip = t.at("clip").get<double>();
    ck.train.seed = t.at("seed").get<std::uint64_t>();
    ck.source = Vocab(meta.at("source_vocab").get<std::vector<std::string>>());
    ck.target = Vocab(meta.at("target_vocab").get<std::vector<std::string>>());
    ck.best_epoch = meta.at("best_epoch").get<int>();
    for (const auto& h : meta.at("history")) {
      ck.history.push_back({h.at("epoch").get<int>(), h.at("train_loss").get<double>(),
                            h.at("dev_perplexity").get<double>(), h.at("lr").get<double>(),
                            h.at("improved").get<bool>()});
    }
    ck.provenance = ordered_json::parse(meta_text).at("provenance").dump();
    mc.validate();
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointCorruptError(std::string("bad checkpoint metadata: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointCorruptError(std::string("bad checkpoint metadata: ") + e.what());
  }
  if (ck.source.size() != mc.src_vocab || ck.target.size() != mc.tgt_vocab) {
    throw CheckpointCorruptError("vocabulary sizes disagree with the model config");
  }

  ck.params = ModelParams<float>::zeros(mc);
  auto layout = tensor_layout(mc);
  if (r.get<std::uint32_t>() != layout.size()) throw CheckpointCorruptError("unexpected tensor count");
  for (const auto& slot : layout) {
    std::size_t start = r.pos();
    auto name_len = r.get<std::uint32_t>();
    std::string name(r.take(name_len), name_len);
    if (name != slot.name) throw CheckpointCorruptError("expected tensor " + slot.name + ", found " + name);
    auto dtype = r.get<std::uint8_t>();
    if (dtype != kF32 && dtype != kF64) throw CheckpointCorruptError("tensor " + name + ": unknown dtype");
    if (r.get<std::uint32_t>() != 2) throw CheckpointCorruptError("tensor " + name + ": rank must be 2");
    auto rows = r.get<std::uint64_t>();
    auto cols = r.get<std::uint64_t>();
    if (rows != static_cast<std::uint64_t>(slot.rows) || cols != static_cast<std::uint64_t>(slot.cols)) {
      throw CheckpointCorruptError("tensor " + name + ": shape disagrees with the model config");
    }
    auto block = ck.params.block(slot);
    for (Eigen::Index i = 0; i < slot.rows; ++i)
      for (Eigen::Index j = 0; j < slot.cols; ++j)
        block(i, j) = dtype == kF32 ? r.get<float>() : static_cast<float>(r.get<double>());
    std::size_t end = r.pos();
    if (r.get<std::uint32_t>() != crc(r.at(start), end - start)) {
      throw CheckpointCorruptError("tensor " + name + ": checksum mismatch");
    }
  }
  if (!r.done()) throw CheckpointCorruptError("trailing bytes after the last tensor");
  return ck;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_checkpoint(bytes);
}

}  // namespace deepregex
