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

#include "sidpt/cli/app.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "sidpt/cli/report.h"
#include "sidpt/cli/run_config.h"
#include "sidpt/common/error.h"
#include "sidpt/data/manifest.h"
#include "sidpt/data/rttm.h"
#include "sidpt/diarization/inference.h"
#include "sidpt/metrics/der.h"
#include "sidpt/metrics/verification.h"
#include "sidpt/simulate/simulate.h"
#include "sidpt/trainer/dia_trainer.h"
#include "sidpt/trainer/sid_trainer.h"

namespace sidpt {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
};

RunConfig Load(const Common& c) { return LoadRunConfig(c.config, c.overrides); }

std::string OutDir(const Common& c, const RunConfig& cfg) {
  const std::string dir = c.out.empty() ? cfg.output_dir : c.out;
  if (dir.empty()) throw ConfigError("no output directory: pass --out or set output_dir");
  fs::create_directories(dir);
  return dir;
}

std::vector<Waveform> LoadNoises(const std::string& manifest) {
  std::vector<Waveform> out;
  if (manifest.empty()) return out;
  for (const auto& p : ReadNoiseManifest(manifest)) out.push_back(ReadWav(p));
  return out;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(path + ": cannot open for writing");
  f << text;
}

int MakeSynthetic(const Common& c, std::ostream& out) {
  const RunConfig cfg = Load(c);
  const std::string dir = OutDir(c, cfg);
  const SynthCorpus corpus = GenerateSynthCorpus(cfg.corpus, dir);
  out << "wrote " << corpus.utterances.size() << " utterances, " << corpus.noise_paths.size()
      << " noises, " << corpus.trials.size() << " trials to " << dir << "\n";
  return kExitOk;
}

int Simulate(const Common& c, const std::string& utterances, const std::string& noises,
             const std::string& subset, std::ostream& out) {
  const RunConfig cfg = Load(c);
  const std::string dir = OutDir(c, cfg);
  SpeakerPools raw;
  for (const auto& u : ReadUtteranceManifest(utterances)) {
    if (subset != "all" && ToString(u.subset) != subset) continue;
    raw[u.speaker_label].push_back(ReadWav(u.audio_path));
  }
  const auto entries = GenerateCorpus(cfg.simulate, TrimPools(raw, cfg.simulate.vad), LoadNoises(noises), dir);
  out << "wrote " << entries.size() << " mixtures and " << (fs::path(dir) / "manifest.jsonl").string() << "\n";
  return kExitOk;
}

int PretrainSidCmd(const Common& c, const std::string& utterances, const std::string& noises,
                   std::ostream& out) {
  const RunConfig cfg = Load(c);
  SidPretrainConfig pc;
  pc.model = cfg.SidModel();
  pc.mixing = cfg.mixing;
  pc.schedule = cfg.schedule_sid;
  pc.val_count_batches = cfg.val_count_batches;
  pc.out_dir = OutDir(c, cfg);
  SidTrainData data;
  for (const auto& u : ReadUtteranceManifest(utterances)) {
    if (u.subset == Subset::kTrain) data.train.push_back({ReadWav(u.audio_path), u.speaker_label});
    if (u.subset == Subset::kVal) data.val.push_back({ReadWav(u.audio_path), u.speaker_label});
  }
  data.noises = LoadNoises(noises);
  const SidPretrainResult r = PretrainSid(pc, data);
  const std::string final_path = (fs::path(pc.out_dir) / "sid_final.ckpt").string();
  SaveSidModel(final_path, r.model, r.log.empty() ? nlohmann::json::object() : r.log.back());
  out << nlohmann::json{{"checkpoint", final_path},
                        {"id_accuracy", r.final_eval.id_accuracy},
                        {"count_accuracy", r.final_eval.count_accuracy}}
             .dump()
      << "\n";
  return kExitOk;
}

int TrainDiaCmd(const Common& c, const std::string& train, const std::string& val, const std::string& init,
                bool finetune, std::ostream& out) {
  const RunConfig cfg = Load(c);
  DiaTrainConfig dc;
  dc.model = cfg.Diarization();
  dc.schedule = finetune ? cfg.schedule_finetune : cfg.schedule_dia;
  dc.chunk = cfg.chunk;
  dc.average_k = cfg.average_k;
  dc.out_dir = OutDir(c, cfg);
  dc.tag = finetune ? (init.empty() ? "scratch" : "finetune") : "dia";
  const PowersetCodec codec = dc.model.Codec();
  const auto train_chunks = LoadChunks(ReadMixtureManifest(train), dc.chunk, dc.model.features, codec);
  const auto val_chunks = LoadChunks(ReadMixtureManifest(val), dc.chunk, dc.model.features, codec);
  DiaTrainResult r;
  if (finetune && !init.empty()) {
    r = Finetune(dc, LoadSidModel(init), train_chunks, val_chunks);
  } else {
    r = PretrainDia(dc, train_chunks, val_chunks);
  }
  const std::string final_path = (fs::path(dc.out_dir) / (dc.tag + "_final.ckpt")).string();
  std::vector<int> averaged;
  for (const auto& m : BestCheckpoints(r.checkpoints, dc.average_k, MetricGoal::kMinimize)) {
    averaged.push_back(m.epoch);
  }
  SaveDiarizationModel(final_path, r.model, {{"averaged_epochs", averaged}});
  out << nlohmann::json{{"checkpoint", final_path}, {"epochs", r.log.size()}}.dump() << "\n";
  return kExitOk;
}

int Infer(const Common& c, const std::string& model_path, const std::string& manifest, const std::string& wav,
          const std::string& ref, std::string file_id, bool dump, std::ostream& out) {
  const RunConfig cfg = Load(c);
  const std::string dir = OutDir(c, cfg);
  const DiarizationModel model = LoadDiarizationModel(model_path);
  std::vector<MixtureEntry> items;
  if (!manifest.empty()) {
    items = ReadMixtureManifest(manifest);
  } else if (!wav.empty()) {
    if (file_id.empty()) file_id = fs::path(wav).stem().string();
    items.push_back({file_id, wav, ref, 0});
  } else {
    throw ConfigError("infer needs --manifest or --wav");
  }
  const PowersetCodec codec = model.config.Codec();
  const double hop = model.config.features.hop;
  std::vector<RttmRecord> all;
  for (const auto& item : items) {
    const auto windows = SlideInfer(ReadWav(item.wav_path), model, cfg.inference);
    int total = 0;
    for (const auto& w : windows) total = std::max(total, w.start_frame + w.num_frames());
    DiarizationHypothesis hyp;
    if (cfg.inference.stitch == "oracle") {
      if (item.rttm_path.empty()) throw ConfigError("oracle stitching needs a reference RTTM");
      const auto records = ReadRttm(item.rttm_path);
      hyp = StitchOracle(windows, RttmToActivity(records, hop, total, SpeakersOf(records)), codec);
    } else {
      hyp = StitchGreedy(windows, codec);
    }
    const auto recs = PosteriorsToRttm(hyp.activity, hop, item.file_id, cfg.inference.min_duration);
    WriteRttm((fs::path(dir) / (item.file_id + ".rttm")).string(), recs);
    if (dump) {
      WritePosteriorDump((fs::path(dir) / (item.file_id + ".post")).string(), AveragePosteriors(windows, total),
                         hop);
    }
    all.insert(all.end(), recs.begin(), recs.end());
  }
  WriteRttm((fs::path(dir) / "all.rttm").string(), all);
  out << "diarized " << items.size() << " recordings into " << dir << "\n";
  return kExitOk;
}

int ScoreDer(const Common& c, const std::vector<std::string>& refs, const std::vector<std::string>& hyps,
             const std::string& report_path, const std::string& append, const std::string& strategy,
             const std::string& dataset, std::ostream& out) {
  const RunConfig cfg = Load(c);
  std::map<std::string, std::vector<RttmRecord>> ref_by, hyp_by;
  std::vector<std::string> order;
  for (const auto& p : refs) {
    for (auto& r : ReadRttm(p)) {
      if (!ref_by.count(r.file_id)) order.push_back(r.file_id);
      ref_by[r.file_id].push_back(r);
    }
  }
  for (const auto& p : hyps) {
    for (auto& r : ReadRttm(p)) hyp_by[r.file_id].push_back(r);
  }
  nlohmann::json files = nlohmann::json::object();
  DerBreakdown pooled;
  double macro = 0.0;
  for (const auto& id : order) {
    const DerBreakdown d = ComputeDer(ref_by[id], hyp_by[id], cfg.scoring_frame_shift);
    files[id] = d.ToJson();
    pooled += d;
    macro += d.der;
  }
  if (order.empty()) throw MetricError("reference RTTM has no speaker records");
  macro /= static_cast<double>(order.size());
  const nlohmann::json report = {{"files", files}, {"macro_average", {{"der", macro}}}, {"pooled", pooled.ToJson()}};
  if (!report_path.empty()) WriteText(report_path, report.dump(2) + "\n");
  if (!append.empty()) {
    AppendJsonLine(append, {{"strategy", strategy}, {"dataset", dataset}, {"der", macro}});
  }
  out << report.dump(2) << "\n";
  return kExitOk;
}

int TrialsEer(const Common& c, const std::string& model_path, const std::string& trials_path,
              std::ostream& out) {
  Load(c);
  const SidModel model = LoadSidModel(model_path);
  const auto trials = ReadTrials(trials_path);
  std::map<std::string, std::vector<RowVector>> cache;
  auto embed = [&](const std::string& path) -> const std::vector<RowVector>& {
    auto it = cache.find(path);
    if (it == cache.end()) it = cache.emplace(path, SpeakerEmbeddings(model, ReadWav(path), 2)).first;
    return it->second;
  };
  std::map<std::string, std::pair<std::vector<double>, std::vector<bool>>> by_cond;
  std::vector<double> scores;
  std::vector<bool> targets;
  for (const auto& t : trials) {
    auto e = embed(t.enroll_path);
    auto x = embed(t.test_path);
    e.resize(std::min<size_t>(e.size(), t.MaxEnrollEmbeddings()));
    x.resize(std::min<size_t>(x.size(), t.MaxTestEmbeddings()));
    const double s = ScoreTrial(e, x);
    scores.push_back(s);
    targets.push_back(t.target);
    auto& bucket = by_cond[ToString(t.condition)];
    bucket.first.push_back(s);
    bucket.second.push_back(t.target);
  }
  nlohmann::json report = {{"trials", trials.size()}, {"eer", ComputeEer(scores, targets)}};
  // A condition without both target and non-target trials has no EER.
  for (const auto& [cond, st] : by_cond) {
    const auto n_target = std::count(st.second.begin(), st.second.end(), true);
    const bool both = n_target > 0 && n_target < static_cast<long>(st.second.size());
    report["conditions"][cond] = both ? nlohmann::json(ComputeEer(st.first, st.second)) : nlohmann::json();
  }
  out << report.dump(2) << "\n";
  return kExitOk;
}

int Report(const std::vector<std::string>& inputs, const std::string& csv, std::ostream& out) {
  std::vector<nlohmann::json> rows;
  for (const auto& p : inputs) {
    for (auto& r : ReadJsonLines(p)) rows.push_back(std::move(r));
  }
  const ResultTable table = CollectResults(rows);
  if (!csv.empty()) WriteText(csv, RenderCsv(table));
  out << RenderTable(table);
  return kExitOk;
}

void AddCommon(CLI::App* sub, Common* c, bool with_out) {
  sub->add_option("-c,--config", c->config, "JSON run config");
  sub->add_option("--set", c->overrides, "Override a config key, e.g. --set schedule.sid.epochs=3");
  if (with_out) sub->add_option("-o,--out", c->out, "Output directory (default: output_dir)");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-speaker identification pretraining and diarization toolkit", "sidpt"};
  app.require_subcommand(1);
  Common common;
  std::string utterances, noises, subset = "all", train, val, init, model, manifest, wav, ref, file_id;
  std::string report_path, append, strategy = "model", dataset = "eval", csv, trials;
  std::vector<std::string> refs, hyps, inputs;
  bool dump = false;

  auto* make = app.add_subcommand("make-synthetic", "Generate a synthetic speaker corpus with noises and trials");
  AddCommon(make, &common, true);

  auto* sim = app.add_subcommand("simulate", "Simulate conversations from an utterance manifest");
  AddCommon(sim, &common, true);
  sim->add_option("--utterances", utterances, "Utterance manifest (JSONL)")->required();
  sim->add_option("--noises", noises, "Noise manifest (JSONL)");
  sim->add_option("--subset", subset, "Utterance subset to draw from")
      ->check(CLI::IsMember({"all", "train", "val", "test"}));

  auto* psid = app.add_subcommand("pretrain-sid", "Multi-speaker identification pretraining");
  AddCommon(psid, &common, true);
  psid->add_option("--utterances", utterances, "Utterance manifest (JSONL)")->required();
  psid->add_option("--noises", noises, "Noise manifest (JSONL)");

  auto* pdia = app.add_subcommand("pretrain-dia", "Diarization pretraining on simulated conversations");
  AddCommon(pdia, &common, true);
  pdia->add_option("--train", train, "Training mixture manifest")->required();
  pdia->add_option("--val", val, "Validation mixture manifest")->required();

  auto* fine = app.add_subcommand("finetune", "Diarization finetuning, from a pretrained encoder or from scratch");
  AddCommon(fine, &common, true);
  fine->add_option("--train", train, "Training mixture manifest")->required();
  fine->add_option("--val", val, "Validation mixture manifest")->required();
  fine->add_option("--init", init, "Identification checkpoint whose encoder is reused");

  auto* infer = app.add_subcommand("infer", "Sliding-window diarization of recordings");
  AddCommon(infer, &common, true);
  infer->add_option("--model", model, "Diarization checkpoint")->required();
  auto* m_opt = infer->add_option("--manifest", manifest, "Mixture manifest to process");
  auto* w_opt = infer->add_option("--wav", wav, "Single recording");
  m_opt->excludes(w_opt);
  infer->add_option("--ref", ref, "Reference RTTM for oracle stitching of --wav");
  infer->add_option("--file-id", file_id, "File id for --wav (default: file stem)");
  infer->add_flag("--dump-posteriors", dump, "Also write averaged class posteriors");

  auto* sder = app.add_subcommand("score-der", "Frame-level DER without collar");
  AddCommon(sder, &common, false);
  sder->add_option("--ref", refs, "Reference RTTM file(s)")->required();
  sder->add_option("--hyp", hyps, "Hypothesis RTTM file(s)")->required();
  sder->add_option("--report", report_path, "Write the JSON report here");
  sder->add_option("--append", append, "Append {strategy, dataset, der} to this JSONL file");
  sder->add_option("--strategy", strategy, "Strategy name for --append");
  sder->add_option("--dataset", dataset, "Dataset name for --append");

  auto* eer = app.add_subcommand("trials-eer", "Score verification trials and report EERs");
  AddCommon(eer, &common, false);
  eer->add_option("--model", model, "Identification checkpoint")->required();
  eer->add_option("--trials", trials, "Trial list")->required();

  auto* rep = app.add_subcommand("report", "Render result or metric-log JSONL files as a table");
  rep->add_option("inputs", inputs, "JSONL files")->required();
  rep->add_option("--csv", csv, "Also write the table as CSV");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsageError;
  }

  try {
    if (*make) return MakeSynthetic(common, out);
    if (*sim) return Simulate(common, utterances, noises, subset, out);
    if (*psid) return PretrainSidCmd(common, utterances, noises, out);
    if (*pdia) return TrainDiaCmd(common, train, val, "", false, out);
    if (*fine) return TrainDiaCmd(common, train, val, init, true, out);
    if (*infer) return Infer(common, model, manifest, wav, ref, file_id, dump, out);
    if (*sder) return ScoreDer(common, refs, hyps, report_path, append, strategy, dataset, out);
    if (*eer) return TrialsEer(common, model, trials, out);
    if (*rep) return Report(inputs, csv, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsageError;
}

}  // namespace sidpt
