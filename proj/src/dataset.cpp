#include "secsemcom/dataset.hpp"

#include <algorithm>

#include <opencv2/imgcodecs.hpp>

#include "secsemcom/rng.hpp"

namespace secsemcom::dataset {

namespace fs = std::filesystem;

std::string to_string(ClassLabel c) {
  return kClassNames[static_cast<int>(c)];
}

std::string to_string(SplitKind k) { return k == SplitKind::train ? "train" : "test"; }

ClassLabel class_label_from_string(const std::string& s) {
  for (int i = 0; i < kNumClasses; ++i)
    if (s == kClassNames[i]) return static_cast<ClassLabel>(i);
  throw DataError("unknown class '" + s + "'");
}

std::map<ClassLabel, size_t> DatasetSplit::per_class_counts() const {
  std::map<ClassLabel, size_t> counts;
  for (const auto& s : samples) ++counts[s.class_label];
  return counts;
}

bool DatasetSplit::is_full_corpus() const {
  const size_t expected = split_kind == SplitKind::train ? 1200 : 400;
  const auto counts = per_class_counts();
  if (counts.size() != kNumClasses) return false;
  for (const auto& [label, n] : counts)
    if (n != expected) return false;
  return true;
}

namespace {

Image decode_image(const fs::path& file) {
  cv::Mat mat = cv::imread(file.string(), cv::IMREAD_COLOR);
  if (mat.empty()) throw DataError("undecodable image file: " + file.string());
  Image img(mat.rows, mat.cols, 3);
  for (int y = 0; y < mat.rows; ++y) {
    const cv::Vec3b* row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < mat.cols; ++x) {
      // OpenCV decodes BGR
      img.at(y, x, 0) = row[x][2] / 255.0f;
      img.at(y, x, 1) = row[x][1] / 255.0f;
      img.at(y, x, 2) = row[x][0] / 255.0f;
    }
  }
  return img;
}

}  // namespace

DatasetSplit load_dataset(const fs::path& root, SplitKind kind) {
  const fs::path split_dir = root / to_string(kind);
  if (!fs::is_directory(split_dir))
    throw DataError("dataset split directory not found: " + split_dir.string());

  struct Entry {
    fs::path file;
    ClassLabel label;
    std::string source_id;
  };
  std::vector<Entry> entries;
  for (const auto& class_dir : fs::directory_iterator(split_dir)) {
    if (!class_dir.is_directory()) continue;
    const ClassLabel label = class_label_from_string(class_dir.path().filename().string());
    for (const auto& f : fs::directory_iterator(class_dir.path())) {
      if (!f.is_regular_file()) continue;
      entries.push_back({f.path(), label,
                         to_string(kind) + "/" + to_string(label) + "/" +
                             f.path().filename().string()});
    }
  }
  if (entries.empty()) throw DataError("no samples found under " + split_dir.string());
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.source_id < b.source_id; });

  DatasetSplit split;
  split.split_kind = kind;
  split.samples.resize(entries.size());
  std::string bad_file;
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < entries.size(); ++i) {
    try {
      split.samples[i] = {decode_image(entries[i].file), entries[i].label,
                          entries[i].source_id};
    } catch (const std::exception&) {
#pragma omp critical
      bad_file = entries[i].file.string();
    }
  }
  if (!bad_file.empty()) throw DataError("undecodable image file: " + bad_file);

  const Image& first = split.samples.front().pixels;
  for (const auto& s : split.samples)
    if (s.pixels.h != first.h || s.pixels.w != first.w || s.pixels.c != first.c)
      throw DataError("wrong dimensions in " + s.source_id + ": got " +
                      std::to_string(s.pixels.w) + "x" + std::to_string(s.pixels.h) +
                      ", split uses " + std::to_string(first.w) + "x" +
                      std::to_string(first.h));
  return split;
}

BatchSequence::BatchSequence(const DatasetSplit& split, const BatchPlan& plan)
    : split_(&split), batch_size_(plan.batch_size) {
  if (plan.batch_size < 1) throw DataError("batch_size must be >= 1");
  order_.resize(split.samples.size());
  for (size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  // Fisher-Yates on our own stream, so the permutation is identical across
  // standard libraries for a given seed.
  RngStream rng(plan.shuffle_seed, "batch-shuffle");
  for (size_t i = order_.size(); i > 1; --i)
    std::swap(order_[i - 1], order_[rng.uniform_int(static_cast<int>(i))]);

  const size_t n = order_.size();
  const size_t full = n / plan.batch_size;
  for (size_t b = 0; b < full; ++b) batch_sizes_.push_back(plan.batch_size);
  const int rem = static_cast<int>(n % plan.batch_size);
  if (rem > 0 && !plan.drop_last) batch_sizes_.push_back(rem);
}

std::vector<size_t> BatchSequence::batch_indices(size_t index) const {
  if (index >= batch_sizes_.size()) throw DataError("batch index out of range");
  const size_t start = index * batch_size_;
  return {order_.begin() + start, order_.begin() + start + batch_sizes_[index]};
}

Tensor<float> BatchSequence::batch(size_t index) const {
  const std::vector<size_t> idx = batch_indices(index);
  const Image& first = split_->samples[idx[0]].pixels;
  Tensor<float> t(static_cast<int>(idx.size()), first.c, first.h, first.w);
  for (size_t b = 0; b < idx.size(); ++b)
    image_into_tensor(split_->samples[idx[b]].pixels, t, static_cast<int>(b));
  return t;
}

BatchSequence make_batches(const DatasetSplit& split, const BatchPlan& plan) {
  return BatchSequence(split, plan);
}

}  // namespace secsemcom::dataset
