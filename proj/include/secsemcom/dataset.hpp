#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "secsemcom/image.hpp"
#include "secsemcom/tensor.hpp"

namespace secsemcom::dataset {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ClassLabel { berry, bird, dog, flower, other };
enum class SplitKind { train, test };

std::string to_string(ClassLabel c);
std::string to_string(SplitKind k);
ClassLabel class_label_from_string(const std::string& s);

inline constexpr int kNumClasses = 5;
inline const char* kClassNames[kNumClasses] = {"berry", "bird", "dog", "flower", "other"};

struct ImageSample {
  Image pixels;
  ClassLabel class_label = ClassLabel::other;
  std::string source_id;  // "<split>/<class>/<filename>"
};

struct DatasetSplit {
  std::vector<ImageSample> samples;
  SplitKind split_kind = SplitKind::train;

  std::map<ClassLabel, size_t> per_class_counts() const;
  // True when every class holds the published per-class count for this split
  // (1200 train / 400 test).
  bool is_full_corpus() const;
};

// Reads the published directory layout <root>/<train|test>/<class>/<image>.
// Images are decoded to RGB floats in [0,1] (8-bit values divided by 255)
// and ordered by sorted source_id. All images in a split must share one
// shape; the offending file is named otherwise.
DatasetSplit load_dataset(const std::filesystem::path& root, SplitKind kind);

struct BatchPlan {
  int batch_size = 32;
  uint64_t shuffle_seed = 0;
  bool drop_last = false;
};

// Deterministically shuffled batches, materialized on demand as
// (B, C, H, W) tensors. The permutation depends only on shuffle_seed.
class BatchSequence {
 public:
  BatchSequence(const DatasetSplit& split, const BatchPlan& plan);

  size_t size() const { return batch_sizes_.size(); }
  Tensor<float> batch(size_t index) const;
  // Sample indices (into split.samples) making up batch `index`.
  std::vector<size_t> batch_indices(size_t index) const;
  const std::vector<size_t>& order() const { return order_; }

 private:
  const DatasetSplit* split_;
  std::vector<size_t> order_;
  std::vector<int> batch_sizes_;
  int batch_size_ = 0;
};

BatchSequence make_batches(const DatasetSplit& split, const BatchPlan& plan);

}  // namespace secsemcom::dataset
