#pragma once

#include <string>

#include "limeout/classifier.hpp"

namespace limeout {

// Serializes a trained model as versioned structured text.  Floating-point
// values are written as C hexfloats, so a load returns a model whose
// predictions are bit-for-bit identical to the original's.
std::string serialize_model(const TrainedModel& model);
void save_model(const TrainedModel& model, const std::string& path);

// Throws DataError on a missing file or any structural problem (bad magic,
// unsupported version, truncation, malformed numbers).
TrainedModel parse_model(const std::string& text);
TrainedModel load_model(const std::string& path);

}  // namespace limeout
