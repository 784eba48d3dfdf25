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

#ifndef SIDPT_DIARIZATION_INFERENCE_H_
#define SIDPT_DIARIZATION_INFERENCE_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "sidpt/data/activity.h"
#include "sidpt/data/rttm.h"
#include "sidpt/data/waveform.h"
#include "sidpt/diarization/model.h"
#include "sidpt/losses/powerset.h"

namespace sidpt {

struct InferenceConfig {
  double window = 10.0;  // seconds
  double shift = 1.0;    // seconds
  double min_duration = 0.0;
  std::string stitch = "greedy";  // or "oracle"

  void Validate() const;
  nlohmann::json ToJson() const;
  static InferenceConfig FromJson(const nlohmann::json& j);
};

// Window start frames over a recording of total_frames: 0, shift, 2 shift,
// ... while the window fits, plus one right-aligned window when a tail is
// left. A recording shorter than one window yields the single start 0.
std::vector<int> WindowStarts(int total_frames, int window_frames, int shift_frames);

// Each window is decoded independently. Features are computed once for the
// recording and mean-normalised per window.
std::vector<PosteriorMatrix> SlideInfer(const Waveform& recording, const DiarizationModel& model,
                                        const InferenceConfig& cfg);

// Same, on precomputed (not normalised) log-mel features.
std::vector<PosteriorMatrix> SlideInferFeatures(const Matrix& features, const DiarizationModel& model,
                                                const InferenceConfig& cfg);

struct DiarizationHypothesis {
  ActivityMatrix activity;  // global speakers x recording frames
  // Per window, the global index of each local powerset speaker (-1 when
  // the speaker is inactive in that window).
  std::vector<std::vector<int>> local_to_global;
};

// Local max_speakers x T binary activity from the class argmax.
ActivityMatrix DecodeWindow(const PosteriorMatrix& window, const PowersetCodec& codec);

// Maps each window's local speakers to reference speakers by maximum
// co-activity; locals without positive overlap become extra speakers.
// Overlapping decisions are averaged and kept where the mean is >= 0.5.
// Throws AlignmentError when the windows do not end exactly at the
// reference length.
DiarizationHypothesis StitchOracle(const std::vector<PosteriorMatrix>& windows,
                                   const ActivityMatrix& reference, const PowersetCodec& codec);

// Reference-free variant: the first window fixes the global labels, later
// windows are matched to the previous one on their shared frames.
DiarizationHypothesis StitchGreedy(const std::vector<PosteriorMatrix>& windows,
                                   const PowersetCodec& codec);

// Maximal runs of each speaker row as records; runs shorter than
// min_duration are dropped. Sorted by onset, then speaker row.
std::vector<RttmRecord> PosteriorsToRttm(const ActivityMatrix& activity, double frame_shift,
                                         const std::string& file_id, double min_duration = 0.0);

// Frame-wise mean of overlapping window posteriors; total_frames x K.
Matrix AveragePosteriors(const std::vector<PosteriorMatrix>& windows, int total_frames);

// Binary dump: int32 T, int32 K, float64 shift (little-endian), then T*K
// float32 values row-major.
void WritePosteriorDump(const std::string& path, const Matrix& posteriors, double frame_shift);
Matrix ReadPosteriorDump(const std::string& path, double* frame_shift = nullptr);

}  // namespace sidpt

#endif  // SIDPT_DIARIZATION_INFERENCE_H_
