#include "davoc/nn/checkpoint.h"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "davoc/common/binary_io.h"
#include "davoc/common/error.h"

namespace davoc::nn {

const std::string& Checkpoint::Meta(const std::string& key) const {
  const auto it = metadata.find(key);
  if (it == metadata.end()) {
    throw DataError("checkpoint is missing metadata key '" + key + "'");
  }
  return it->second;
}

void WriteCheckpoint(std::ostream& out, const Checkpoint& ckpt) {
  out.write("DAVC", 4);
  binio::WriteU32(out, kCheckpointVersion);
  binio::WriteU32(out, static_cast<uint32_t>(ckpt.metadata.size()));
  for (const auto& [key, value] : ckpt.metadata) {
    binio::WriteString(out, key);
    binio::WriteString(out, value);
  }
  binio::WriteU32(out, static_cast<uint32_t>(ckpt.tensors.size()));
  for (const NamedTensor& t : ckpt.tensors) {
    binio::WriteString(out, t.name);
    binio::WriteU32(out, static_cast<uint32_t>(t.shape.size()));
    for (uint32_t d : t.shape) binio::WriteU32(out, d);
    for (double v : t.values) binio::WriteF64(out, v);
  }
}

Checkpoint ReadCheckpoint(std::istream& in) {
  binio::ExpectMagic(in, "DAVC");
  const uint32_t version = binio::ReadU32(in, "version");
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  const uint32_t n_meta = binio::ReadU32(in, "metadata count");
  for (uint32_t i = 0; i < n_meta; ++i) {
    std::string key = binio::ReadString(in, "metadata key");
    ckpt.metadata[key] = binio::ReadString(in, "metadata value");
  }
  const uint32_t n_tensors = binio::ReadU32(in, "tensor count");
  for (uint32_t i = 0; i < n_tensors; ++i) {
    NamedTensor t;
    t.name = binio::ReadString(in, "tensor name");
    const uint32_t rank = binio::ReadU32(in, "tensor rank");
    if (rank > 8) throw DataError("implausible tensor rank in " + t.name);
    uint64_t count = 1;
    for (uint32_t r = 0; r < rank; ++r) {
      t.shape.push_back(binio::ReadU32(in, "tensor dim"));
      count *= t.shape.back();
    }
    if (count > (1ULL << 32)) throw DataError("implausible tensor size");
    t.values.resize(count);
    for (double& v : t.values) v = binio::ReadF64(in, "tensor values");
    ckpt.tensors.push_back(std::move(t));
  }
  return ckpt;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  WriteCheckpoint(out, ckpt);
  if (!out) throw DataError("short write to " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return ReadCheckpoint(in);
}

std::vector<NamedTensor> ExportParams(const ParamList& params) {
  std::vector<NamedTensor> out;
  for (const Param* p : params) {
    NamedTensor t;
    t.name = p->name;
    t.shape = {static_cast<uint32_t>(p->value.rows()),
               static_cast<uint32_t>(p->value.cols())};
    t.values.assign(p->value.data(), p->value.data() + p->value.size());
    out.push_back(std::move(t));
  }
  return out;
}

void ImportParams(const std::vector<NamedTensor>& tensors,
                  const ParamList& params) {
  std::unordered_map<std::string, const NamedTensor*> by_name;
  for (const NamedTensor& t : tensors) by_name[t.name] = &t;
  for (Param* p : params) {
    const auto it = by_name.find(p->name);
    if (it == by_name.end()) {
      throw DataError("checkpoint has no tensor '" + p->name + "'");
    }
    const NamedTensor& t = *it->second;
    if (t.shape.size() != 2 || t.shape[0] != p->value.rows() ||
        t.shape[1] != p->value.cols()) {
      throw DataError("shape mismatch for tensor '" + p->name + "'");
    }
    std::copy(t.values.begin(), t.values.end(), p->value.data());
  }
}

}  // namespace davoc::nn
