// Copyright (c) 2026 The sidpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sidpt/diarization/inference.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "sidpt/common/error.h"
#include "sidpt/common/json_config.h"
#include "sidpt/metrics/hungarian.h"

namespace sidpt {

void InferenceConfig::Validate() const {
  if (!(window > 0) || !(shift > 0)) throw ConfigError("inference: window and shift must be positive");
  if (min_duration < 0) throw ConfigError("inference.min_duration must be >= 0");
  if (stitch != "greedy" && stitch != "oracle") {
    throw ConfigError("inference.stitch must be 'greedy' or 'oracle'");
  }
}

nlohmann::json InferenceConfig::ToJson() const {
  return {{"window", window}, {"shift", shift}, {"min_duration", min_duration}, {"stitch", stitch}};
}

InferenceConfig InferenceConfig::FromJson(const nlohmann::json& j) {
  const std::string sec = "inference";
  CheckKnownKeys(j, {"window", "shift", "min_duration", "stitch"}, sec);
  InferenceConfig c;
  ReadKey(j, "window", &c.window, sec);
  ReadKey(j, "shift", &c.shift, sec);
  ReadKey(j, "min_duration", &c.min_duration, sec);
  ReadKey(j, "stitch", &c.stitch, sec);
  c.Validate();
  return c;
}

std::vector<int> WindowStarts(int total_frames, int window_frames, int shift_frames) {
  if (total_frames <= window_frames) return {0};
  std::vector<int> starts;
  int s = 0;
  for (; s + window_frames <= total_frames; s += shift_frames) starts.push_back(s);
  if (starts.back() + window_frames < total_frames) starts.push_back(total_frames - window_frames);
  return starts;
}

std::vector<PosteriorMatrix> SlideInferFeatures(const Matrix& features, const DiarizationModel& model,
                                                const InferenceConfig& cfg) {
  cfg.Validate();
  const FeatureConfig& fc = model.config.features;
  const int total = static_cast<int>(features.rows());
  const int win = NumFrames(SecondsToSamples(cfg.window), fc);
  const int shift = std::max(1, static_cast<int>(std::lround(cfg.shift / fc.hop)));
  std::vector<PosteriorMatrix> out;
  for (int start : WindowStarts(total, win, shift)) {
    Matrix block = features.middleRows(start, std::min(win, total - start));
    MeanNormalize(&block);
    PosteriorMatrix p = DiarizationPosteriors(model, block);
    p.start_frame = start;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PosteriorMatrix> SlideInfer(const Waveform& recording, const DiarizationModel& model,
                                        const InferenceConfig& cfg) {
  return SlideInferFeatures(LogMel(recording, model.config.features).values, model, cfg);
}

ActivityMatrix DecodeWindow(const PosteriorMatrix& window, const PowersetCodec& codec) {
  return codec.DecodeSequence(codec.Argmax(window.values), window.frame_shift);
}

namespace {

int TotalFrames(const std::vector<PosteriorMatrix>& windows) {
  int total = 0;
  for (const auto& w : windows) total = std::max(total, w.start_frame + w.num_frames());
  return total;
}

// Active local rows in a content-defined order, so the result does not
// depend on how the model labelled them.
std::vector<int> CanonicalActiveRows(const ActivityMatrix& local) {
  std::vector<int> rows;
  for (int s = 0; s < local.num_speakers(); ++s) {
    if (local.RowSum(s) > 0) rows.push_back(s);
  }
  auto key = [&](int s) {
    std::vector<uint8_t> v(static_cast<size_t>(local.num_frames()));
    for (int t = 0; t < local.num_frames(); ++t) v[t] = local.at(s, t);
    return v;
  };
  std::stable_sort(rows.begin(), rows.end(), [&](int a, int b) { return key(a) > key(b); });
  return rows;
}

class Accumulator {
 public:
  explicit Accumulator(int total_frames) : total_(total_frames), cover_(total_frames, 0) {}

  int AddSpeaker() {
    votes_.emplace_back(total_, 0);
    return static_cast<int>(votes_.size()) - 1;
  }
  int num_speakers() const { return static_cast<int>(votes_.size()); }
  void Cover(int start, int count) {
    for (int t = start; t < start + count; ++t) ++cover_[t];
  }
  void Vote(int global, int t) { ++votes_[global][t]; }

  ActivityMatrix Finish(double shift, std::vector<std::string> names) const {
    ActivityMatrix a(num_speakers(), total_, shift, std::move(names));
    for (int g = 0; g < num_speakers(); ++g) {
      for (int t = 0; t < total_; ++t) a.set(g, t, cover_[t] > 0 && 2 * votes_[g][t] >= cover_[t]);
    }
    return a;
  }

 private:
  int total_;
  std::vector<int> cover_;
  std::vector<std::vector<int>> votes_;
};

void VoteWindow(const ActivityMatrix& local, const std::vector<int>& to_global, int start,
                Accumulator* acc) {
  for (int s = 0; s < local.num_speakers(); ++s) {
    if (to_global[s] < 0) continue;
    for (int t = 0; t < local.num_frames(); ++t) {
      if (local.at(s, t)) acc->Vote(to_global[s], start + t);
    }
  }
}

}  // namespace

DiarizationHypothesis StitchOracle(const std::vector<PosteriorMatrix>& windows,
                                   const ActivityMatrix& reference, const PowersetCodec& codec) {
  const int total = TotalFrames(windows);
  if (windows.empty() || reference.num_frames() != total) {
    throw AlignmentError("reference has " + std::to_string(reference.num_frames()) +
                         " frames, windows cover " + std::to_string(total));
  }
  const int n_ref = reference.num_speakers();
  Accumulator acc(total);
  std::vector<std::string> names = reference.speaker_order();
  if (static_cast<int>(names.size()) != n_ref) {
    names.clear();
    for (int r = 0; r < n_ref; ++r) names.push_back("ref" + std::to_string(r));
  }
  for (int r = 0; r < n_ref; ++r) acc.AddSpeaker();

  DiarizationHypothesis hyp;
  for (const auto& w : windows) {
    const ActivityMatrix local = DecodeWindow(w, codec);
    const ActivityMatrix ref = reference.SliceFrames(w.start_frame, w.num_frames());
    const std::vector<int> rows = CanonicalActiveRows(local);
    Matrix score = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), n_ref);
    for (size_t i = 0; i < rows.size(); ++i) {
      for (int r = 0; r < n_ref; ++r) {
        int co = 0;
        for (int t = 0; t < local.num_frames(); ++t) co += local.at(rows[i], t) & ref.at(r, t);
        score(static_cast<Eigen::Index>(i), r) = co;
      }
    }
    const std::vector<int> assign = MaxWeightAssignment(score);
    std::vector<int> to_global(static_cast<size_t>(local.num_speakers()), -1);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (assign[i] >= 0 && score(static_cast<Eigen::Index>(i), assign[i]) > 0) {
        to_global[rows[i]] = assign[i];
      } else {
        to_global[rows[i]] = acc.AddSpeaker();
        names.push_back("extra" + std::to_string(to_global[rows[i]] - n_ref));
      }
    }
    acc.Cover(w.start_frame, w.num_frames());
    VoteWindow(local, to_global, w.start_frame, &acc);
    hyp.local_to_global.push_back(std::move(to_global));
  }
  hyp.activity = acc.Finish(reference.frame_shift(), std::move(names));
  return hyp;
}

DiarizationHypothesis StitchGreedy(const std::vector<PosteriorMatrix>& windows,
                                   const PowersetCodec& codec) {
  DiarizationHypothesis hyp;
  if (windows.empty()) return hyp;
  const int total = TotalFrames(windows);
  Accumulator acc(total);
  std::vector<std::string> names;
  ActivityMatrix prev_local;
  const std::vector<int>* prev_map = nullptr;
  int prev_start = 0;

  for (const auto& w : windows) {
    const ActivityMatrix local = DecodeWindow(w, codec);
    const std::vector<int> rows = CanonicalActiveRows(local);
    std::vector<int> to_global(static_cast<size_t>(local.num_speakers()), -1);
    std::vector<char> matched(rows.size(), 0);
    if (prev_map != nullptr) {
      const int lo = w.start_frame;
      const int hi = std::min(prev_start + prev_local.num_frames(), w.start_frame + w.num_frames());
      std::vector<int> prev_rows;  // previous local rows that carry a global label
      for (int s = 0; s < prev_local.num_speakers(); ++s) {
        if ((*prev_map)[s] >= 0) prev_rows.push_back(s);
      }
      std::sort(prev_rows.begin(), prev_rows.end(),
                [&](int a, int b) { return (*prev_map)[a] < (*prev_map)[b]; });
      if (hi > lo && !prev_rows.empty() && !rows.empty()) {
        Matrix score = Matrix::Zero(static_cast<Eigen::Index>(rows.size()),
                                    static_cast<Eigen::Index>(prev_rows.size()));
        for (size_t i = 0; i < rows.size(); ++i) {
          for (size_t j = 0; j < prev_rows.size(); ++j) {
            int co = 0;
            for (int t = lo; t < hi; ++t) {
              co += local.at(rows[i], t - w.start_frame) & prev_local.at(prev_rows[j], t - prev_start);
            }
            score(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = co;
          }
        }
        const std::vector<int> assign = MaxWeightAssignment(score);
        for (size_t i = 0; i < rows.size(); ++i) {
          if (assign[i] >= 0 && score(static_cast<Eigen::Index>(i), assign[i]) > 0) {
            to_global[rows[i]] = (*prev_map)[prev_rows[assign[i]]];
            matched[i] = 1;
          }
        }
      }
    }
    for (size_t i = 0; i < rows.size(); ++i) {
      if (matched[i]) continue;
      to_global[rows[i]] = acc.AddSpeaker();
      names.push_back("spk" + std::to_string(to_global[rows[i]]));
    }
    acc.Cover(w.start_frame, w.num_frames());
    VoteWindow(local, to_global, w.start_frame, &acc);
    hyp.local_to_global.push_back(std::move(to_global));
    prev_local = local;
    prev_map = &hyp.local_to_global.back();
    prev_start = w.start_frame;
  }
  hyp.activity = acc.Finish(windows.front().frame_shift, std::move(names));
  return hyp;
}

std::vector<RttmRecord> PosteriorsToRttm(const ActivityMatrix& activity, double frame_shift,
                                         const std::string& file_id, double min_duration) {
  struct Run {
    int start, len, speaker;
  };
  std::vector<Run> runs;
  for (int s = 0; s < activity.num_speakers(); ++s) {
    int t = 0;
    while (t < activity.num_frames()) {
      if (!activity.at(s, t)) {
        ++t;
        continue;
      }
      const int start = t;
      while (t < activity.num_frames() && activity.at(s, t)) ++t;
      if ((t - start) * frame_shift >= min_duration) runs.push_back({start, t - start, s});
    }
  }
  std::stable_sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
    return a.start != b.start ? a.start < b.start : a.speaker < b.speaker;
  });
  const auto& order = activity.speaker_order();
  std::vector<RttmRecord> out;
  for (const auto& r : runs) {
    const std::string name = r.speaker < static_cast<int>(order.size()) ? order[r.speaker]
                                                                       : "spk" + std::to_string(r.speaker);
    out.push_back({file_id, r.start * frame_shift, r.len * frame_shift, name});
  }
  return out;
}

Matrix AveragePosteriors(const std::vector<PosteriorMatrix>& windows, int total_frames) {
  const Eigen::Index k = windows.empty() ? 0 : windows.front().values.cols();
  Matrix sum = Matrix::Zero(total_frames, k);
  std::vector<int> count(static_cast<size_t>(total_frames), 0);
  for (const auto& w : windows) {
    const int n = std::min(w.num_frames(), total_frames - w.start_frame);
    if (n <= 0) continue;
    sum.middleRows(w.start_frame, n) += w.values.topRows(n);
    for (int t = 0; t < n; ++t) ++count[w.start_frame + t];
  }
  for (int t = 0; t < total_frames; ++t) {
    if (count[t] > 0) sum.row(t) /= count[t];
  }
  return sum;
}

namespace {

template <typename T>
void PutLe(std::ofstream& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T GetLe(std::ifstream& in, const std::string& path) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw FormatError(path + ": truncated posterior dump");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void WritePosteriorDump(const std::string& path, const Matrix& posteriors, double frame_shift) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  PutLe<int32_t>(out, static_cast<int32_t>(posteriors.rows()));
  PutLe<int32_t>(out, static_cast<int32_t>(posteriors.cols()));
  PutLe<double>(out, frame_shift);
  for (Eigen::Index t = 0; t < posteriors.rows(); ++t) {
    for (Eigen::Index k = 0; k < posteriors.cols(); ++k) PutLe<float>(out, static_cast<float>(posteriors(t, k)));
  }
  if (!out) throw IoError(path + ": write failed");
}

Matrix ReadPosteriorDump(const std::string& path, double* frame_shift) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  const int32_t t_len = GetLe<int32_t>(in, path);
  const int32_t k = GetLe<int32_t>(in, path);
  const double shift = GetLe<double>(in, path);
  if (t_len < 0 || k < 0) throw FormatError(path + ": negative dimensions");
  if (frame_shift != nullptr) *frame_shift = shift;
  Matrix m(t_len, k);
  for (int32_t t = 0; t < t_len; ++t) {
    for (int32_t c = 0; c < k; ++c) m(t, c) = GetLe<float>(in, path);
  }
  return m;
}

}  // namespace sidpt
