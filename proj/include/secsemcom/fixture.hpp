#pragma once

#include <filesystem>

#include "secsemcom/dataset.hpp"
#include "secsemcom/rng.hpp"

namespace secsemcom::fixture {

// Procedurally generated stand-in corpus in the same directory layout as the
// real one (train|test/<class>/*.png): smooth gradients plus a few large
// soft shapes per class family. Used for CI and desk-scale runs when the
// real corpus is not on disk.
struct FixtureSpec {
  int image_size = 64;
  int train_per_class = 80;
  int test_per_class = 20;
  uint64_t seed = 1234;
};

Image synth_image(dataset::ClassLabel label, int size, RngStream& rng);

void synth_corpus(const std::filesystem::path& root, const FixtureSpec& spec);

}  // namespace secsemcom::fixture
