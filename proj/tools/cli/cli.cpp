// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "dataset.hpp"
#include "json.hpp"
#include "taxcode/codec.hpp"
#include "taxcode/decoder.hpp"
#include "taxcode/error.hpp"
#include "taxcode/external_scorer.hpp"
#include "taxcode/metrics.hpp"
#include "taxcode/scorer.hpp"
#include "taxcode/taxonomy.hpp"
#include "taxcode/textprep.hpp"

namespace taxcode::cli {

namespace {

using ojson = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string taxonomy;
  std::string kind = "hsn";
  bool kind_given = false;
  std::string config;
  std::string catalog;
  double enrich_threshold = 0.8;
  std::string input = "-";
  std::string scorer = "uniform";
  std::size_t beam_width = 5;
  std::size_t top_n = 1;
  std::size_t jobs = 1;
  long long seed = 0;
  bool skip_errors = false;
  long long timeout_ms = 30000;
  std::string predictions;
  std::string gold;
  std::string format = "json";
};

// Opens `path` or hands back `in` for "-".
class InputFile {
 public:
  InputFile(const std::string& path, std::istream& in) : path_(path) {
    if (path == "-") {
      stream_ = &in;
      return;
    }
    file_.open(path, std::ios::binary);
    if (!file_) throw Error(ErrorCode::kMalformedInput, "cannot open '" + path + "'");
    stream_ = &file_;
  }

  std::istream& stream() { return *stream_; }
  const std::string& name() const { return path_ == "-" ? kStdin : path_; }

 private:
  inline static const std::string kStdin = "<stdin>";
  std::string path_;
  std::ifstream file_;
  std::istream* stream_ = nullptr;
};

CodeKind resolve_kind(const std::string& text) {
  const auto kind = parse_kind(text);
  if (!kind) throw UsageError("--kind must be hsn or sac, got '" + text + "'");
  return *kind;
}

TaxonomyTrie load_trie(const Options& o, std::istream& in) {
  if (o.taxonomy.empty()) throw UsageError("--taxonomy is required");
  InputFile file(o.taxonomy, in);
  return TaxonomyTrie::load(file.stream(), resolve_kind(o.kind));
}

CleanConfig load_config(const Options& o, std::istream& in) {
  if (o.config.empty()) return CleanConfig::defaults();
  InputFile file(o.config, in);
  return load_clean_config(file.stream());
}

std::vector<CatalogEntry> load_catalog_file(const Options& o, std::istream& in) {
  if (o.catalog.empty()) return {};
  if (!(o.enrich_threshold > 0.0 && o.enrich_threshold <= 1.0)) {
    throw UsageError("--enrich-threshold must lie in (0, 1]");
  }
  InputFile file(o.catalog, in);
  return load_catalog(file.stream());
}

CleanedText prepare(const std::string& description, const CleanConfig& config,
                    const std::vector<CatalogEntry>& catalog, double threshold) {
  CleanedText cleaned = clean(description, config);
  if (!cleaned.rejected() && !catalog.empty()) cleaned = enrich(cleaned, catalog, threshold);
  return cleaned;
}

std::string require_description(const DatasetRecord& r, const std::string& source) {
  if (!r.description) {
    throw Error(ErrorCode::kMalformedInput,
                source + ":" + std::to_string(r.line) + ": record '" + r.id + "' has no description");
  }
  return *r.description;
}

// --- validate-taxonomy -------------------------------------------------------

int cmd_validate_taxonomy(const Options& o, std::istream& in, std::ostream& out) {
  const TaxonomyTrie trie = load_trie(o, in);
  const auto chapters = trie.distinct_values(Level::kChapter).size();
  std::size_t complete = 0;
  for (const auto& leaf : trie.leaves()) {
    if (leaf.segments().size() == trie.depth()) ++complete;
  }
  out << "kind: " << kind_name(trie.kind()) << '\n';
  out << "leaves: " << trie.leaf_count() << ", chapters: " << chapters << '\n';
  out << "depth: " << trie.depth() << " ("
      << (complete == trie.leaf_count() ? "ok" : "incomplete paths") << ")\n";
  out << "distinct segments:";
  for (std::size_t i = 0; i < trie.depth(); ++i) {
    const Level level = level_at(i);
    out << ' ' << level_name(level) << '=' << trie.distinct_values(level).size();
  }
  out << '\n';
  return kExitOk;
}

// --- vocab -------------------------------------------------------------------

int cmd_vocab(const Options& o, std::istream& in, std::ostream& out) {
  const TaxonomyTrie trie = load_trie(o, in);
  for (const auto& token : emit_vocabulary(trie)) out << token.render() << '\n';
  return kExitOk;
}

// --- clean -------------------------------------------------------------------

int cmd_clean(const Options& o, std::istream& in, std::ostream& out) {
  const CleanConfig config = load_config(o, in);
  const auto catalog = load_catalog_file(o, in);
  InputFile input(o.input, in);
  const auto records = read_records(input.stream(), input.name());
  for (const auto& r : records) {
    const CleanedText cleaned =
        prepare(require_description(r, input.name()), config, catalog, o.enrich_threshold);
    ojson row;
    row["id"] = r.id;
    row["text"] = cleaned.text;
    row["rejected"] = cleaned.rejected();
    row["reason"] = cleaned.rejection ? ojson(rejection_reason_name(*cleaned.rejection)) : ojson();
    out << row.dump() << '\n';
  }
  return kExitOk;
}

// --- predict -----------------------------------------------------------------

std::unique_ptr<Scorer> make_scorer(const Options& o, CodeKind kind, const CleanConfig& config,
                                    std::istream& in) {
  const std::string& choice = o.scorer;
  if (choice == "uniform") return std::make_unique<UniformScorer>();
  if (choice.rfind("table:", 0) == 0) {
    InputFile file(choice.substr(6), in);
    return std::make_unique<TableScorer>(TableScorer::load(file.stream()));
  }
  if (choice.rfind("knn:", 0) == 0) {
    const std::string rest = choice.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0) {
      throw UsageError("knn scorer expects knn:<train.jsonl>:<k>");
    }
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      const long long parsed = std::stoll(rest.substr(colon + 1), &used);
      if (used != rest.size() - colon - 1 || parsed < 1) throw std::invalid_argument("k");
      k = static_cast<std::size_t>(parsed);
    } catch (const std::exception&) {
      throw UsageError("knn scorer needs a positive integer k, got '" + rest.substr(colon + 1) + "'");
    }
    InputFile file(rest.substr(0, colon), in);
    const auto records = read_records(file.stream(), file.name());
    std::vector<TrainingExample> examples;
    for (const auto& r : records) {
      const std::string at = file.name() + ":" + std::to_string(r.line) + ": ";
      if (!r.code) throw Error(ErrorCode::kMalformedInput, at + "training record has no code");
      TaxCode code = [&] {
        try {
          return TaxCode::parse(kind, *r.code);
        } catch (const Error& e) {
          throw Error(ErrorCode::kMalformedInput, at + e.what());
        }
      }();
      CleanedText cleaned = clean(require_description(r, file.name()), config);
      if (cleaned.rejected()) continue;
      examples.push_back({std::move(cleaned.text), std::move(code)});
    }
    return std::make_unique<SimilarityScorer>(SimilarityScorer::fit(std::move(examples), k));
  }
  if (choice.rfind("external:", 0) == 0) {
    if (o.timeout_ms < 1) throw UsageError("--timeout-ms must be positive");
    return std::make_unique<ExternalScorer>(
        ExternalScorerOptions{choice.substr(9), std::chrono::milliseconds(o.timeout_ms)});
  }
  throw UsageError("unknown scorer '" + choice +
                   "' (expected uniform, table:<path>, knn:<train>:<k> or external:<command>)");
}

ojson trace_json(const std::vector<TraceStep>& trace) {
  ojson steps = ojson::array();
  for (const auto& s : trace) {
    ojson step;
    step["level"] = std::string(level_name(s.level));
    step["segment"] = s.segment.digits();
    step["candidates"] = s.candidate_count;
    step["probability"] = s.probability;
    steps.push_back(std::move(step));
  }
  return steps;
}

struct RecordOutcome {
  std::string line;
  std::exception_ptr error;
};

RecordOutcome decode_record(const DatasetRecord& r, const std::string& source,
                            const TaxonomyTrie& trie, const Scorer& scorer,
                            const CleanConfig& config, const std::vector<CatalogEntry>& catalog,
                            const Options& o) {
  RecordOutcome outcome;
  try {
    const CleanedText cleaned =
        prepare(require_description(r, source), config, catalog, o.enrich_threshold);
    ojson row;
    row["id"] = r.id;
    if (cleaned.rejected()) {
      row["rejected"] = true;
      row["reason"] = std::string(rejection_reason_name(*cleaned.rejection));
    } else {
      const auto predictions =
          beam_search(trie, scorer, cleaned.text, BeamConfig{o.beam_width, o.top_n});
      const Prediction& best = predictions.front();
      row["code"] = best.code.digits();
      row["probability"] = best.probability;
      row["trace"] = trace_json(best.trace);
      row["fallbacks"] = best.fallback_events;
      if (o.top_n > 1) {
        ojson alternatives = ojson::array();
        for (std::size_t i = 1; i < predictions.size(); ++i) {
          ojson alt;
          alt["code"] = predictions[i].code.digits();
          alt["probability"] = predictions[i].probability;
          alt["fallbacks"] = predictions[i].fallback_events;
          alternatives.push_back(std::move(alt));
        }
        row["alternatives"] = std::move(alternatives);
      }
    }
    outcome.line = row.dump();
  } catch (...) {
    outcome.error = std::current_exception();
  }
  return outcome;
}

int cmd_predict(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  if (o.beam_width < 1) throw UsageError("--beam-width must be >= 1");
  if (o.top_n < 1 || o.top_n > o.beam_width) throw UsageError("--top-n must lie in [1, beam width]");
  if (o.jobs < 1) throw UsageError("--jobs must be >= 1");

  const TaxonomyTrie trie = load_trie(o, in);
  const CleanConfig config = load_config(o, in);
  const auto catalog = load_catalog_file(o, in);
  InputFile input(o.input, in);
  const auto records = read_records(input.stream(), input.name());
  const auto scorer = make_scorer(o, trie.kind(), config, in);

  std::vector<RecordOutcome> outcomes(records.size());
  const std::size_t jobs =
      scorer->parallel_friendly() ? std::min(o.jobs, std::max<std::size_t>(records.size(), 1)) : 1;
  if (jobs <= 1) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      outcomes[i] = decode_record(records[i], input.name(), trie, *scorer, config, catalog, o);
      if (outcomes[i].error && !o.skip_errors) {
        outcomes.resize(i + 1);
        break;
      }
    }
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = cursor++; i < records.size(); i = cursor++) {
          outcomes[i] = decode_record(records[i], input.name(), trie, *scorer, config, catalog, o);
        }
      });
    }
  }

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].error) {
      out << outcomes[i].line << '\n';
      continue;
    }
    try {
      std::rethrow_exception(outcomes[i].error);
    } catch (const Error& e) {
      if (o.skip_errors) {
        ojson row;
        row["id"] = records[i].id;
        row["error"] = e.what();
        out << row.dump() << '\n';
        continue;
      }
      err << "error: record '" << records[i].id << "': " << e.what() << '\n';
      return is_scorer_error(e.code()) ? kExitScorerError : kExitDataError;
    }
  }
  return kExitOk;
}

// --- eval --------------------------------------------------------------------

TaxCode parse_code(const std::string& digits, const std::optional<CodeKind>& kind,
                   const std::string& at) {
  try {
    if (kind) return TaxCode::parse(*kind, digits);
    if (digits.size() == 2 * depth_of(CodeKind::kHsn)) return TaxCode::parse(CodeKind::kHsn, digits);
    if (digits.size() == 2 * depth_of(CodeKind::kSac)) return TaxCode::parse(CodeKind::kSac, digits);
    throw Error(ErrorCode::kInvalidCode, "code '" + digits + "' is neither 8 nor 6 digits");
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedInput, at + e.what());
  }
}

int cmd_eval(const Options& o, std::istream& in, std::ostream& out) {
  if (o.predictions.empty() || o.gold.empty()) {
    throw UsageError("eval needs --predictions and --gold");
  }
  if (o.format != "json" && o.format != "table" && o.format != "both") {
    throw UsageError("--format must be json, table or both");
  }
  const std::optional<CodeKind> kind =
      o.kind_given ? std::optional<CodeKind>(resolve_kind(o.kind)) : std::nullopt;

  InputFile pred_file(o.predictions, in);
  const auto predictions = read_predictions(pred_file.stream(), pred_file.name());
  InputFile gold_file(o.gold, in);
  const auto gold = read_records(gold_file.stream(), gold_file.name());

  std::map<std::string, const PredictionRecord*> by_id;
  for (const auto& p : predictions) by_id[p.id] = &p;
  if (by_id.size() != gold.size()) {
    throw Error(ErrorCode::kIdMismatch, "predictions have " + std::to_string(by_id.size()) +
                                            " ids, gold has " + std::to_string(gold.size()));
  }

  std::vector<LabeledPair> pairs;
  pairs.reserve(gold.size());
  for (const auto& g : gold) {
    const std::string at = gold_file.name() + ":" + std::to_string(g.line) + ": ";
    const auto it = by_id.find(g.id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kIdMismatch, at + "id '" + g.id + "' has no prediction");
    }
    if (!g.code) throw Error(ErrorCode::kMissingGoldCode, at + "record '" + g.id + "' has no code");
    LabeledPair pair{std::nullopt, parse_code(*g.code, kind, at), std::nullopt};
    if (it->second->code) {
      pair.predicted = parse_code(*it->second->code, kind,
                                  pred_file.name() + ":" + std::to_string(it->second->line) + ": ");
    }
    if (g.date) {
      pair.date = parse_iso_date(*g.date);
      if (!pair.date) throw Error(ErrorCode::kMalformedInput, at + "bad date '" + *g.date + "'");
    }
    pairs.push_back(std::move(pair));
  }

  const EvalReport report = evaluate(pairs);
  if (o.format == "json" || o.format == "both") out << report_to_json(report) << '\n';
  if (o.format == "table" || o.format == "both") out << report_to_table(report);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Hierarchical HSN/SAC tax code classification", "taxcode"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--kind", o.kind, "Code kind: hsn or sac")->default_val("hsn");
    cmd->add_option("--seed", o.seed, "Accepted and ignored; the pipeline is deterministic");
  };
  auto add_taxonomy = [&o](CLI::App* cmd) {
    cmd->add_option("--taxonomy", o.taxonomy, "Taxonomy CSV (kind,code,description)")->required();
  };
  auto add_cleaning = [&o](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "Cleaning config JSON");
    cmd->add_option("--catalog", o.catalog, "Enrichment catalog JSON");
    cmd->add_option("--enrich-threshold", o.enrich_threshold, "Minimum catalog similarity")
        ->default_val(0.8);
    cmd->add_option("--input", o.input, "Input JSON Lines ('-' for stdin)")->default_val("-");
  };

  auto* validate = app.add_subcommand("validate-taxonomy", "Load a taxonomy and print a summary");
  add_taxonomy(validate);
  add_common(validate);

  auto* vocab = app.add_subcommand("vocab", "Print the special-token vocabulary");
  add_taxonomy(vocab);
  add_common(vocab);

  auto* clean_cmd = app.add_subcommand("clean", "Clean descriptions (JSON Lines in, JSON Lines out)");
  add_cleaning(clean_cmd);
  add_common(clean_cmd);

  auto* predict_cmd = app.add_subcommand("predict", "Predict codes with constrained beam search");
  add_taxonomy(predict_cmd);
  add_cleaning(predict_cmd);
  add_common(predict_cmd);
  predict_cmd->add_option("--scorer", o.scorer,
                          "uniform | table:<path> | knn:<train.jsonl>:<k> | external:<command>")
      ->default_val("uniform");
  predict_cmd->add_option("--beam-width", o.beam_width, "Beam width")->default_val(5);
  predict_cmd->add_option("--top-n", o.top_n, "Predictions kept per record")->default_val(1);
  predict_cmd->add_option("--jobs", o.jobs, "Parallel decoding threads")->default_val(1);
  predict_cmd->add_option("--timeout-ms", o.timeout_ms, "External scorer reply timeout")
      ->default_val(30000);
  predict_cmd->add_flag("--skip-errors", o.skip_errors,
                        "Emit per-record error objects instead of aborting");

  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against gold labels");
  add_common(eval_cmd);
  eval_cmd->add_option("--predictions", o.predictions, "Predictions JSON Lines")->required();
  eval_cmd->add_option("--gold", o.gold, "Gold JSON Lines")->required();
  eval_cmd->add_option("--format", o.format, "json | table | both")->default_val("json");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("taxcode");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  for (auto* cmd : {validate, vocab, clean_cmd, predict_cmd, eval_cmd}) {
    if (cmd->parsed() && cmd->count("--kind") > 0) o.kind_given = true;
  }

  try {
    if (validate->parsed()) return cmd_validate_taxonomy(o, in, out);
    if (vocab->parsed()) return cmd_vocab(o, in, out);
    if (clean_cmd->parsed()) return cmd_clean(o, in, out);
    if (predict_cmd->parsed()) return cmd_predict(o, in, out, err);
    if (eval_cmd->parsed()) return cmd_eval(o, in, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (is_scorer_error(e.code())) return kExitScorerError;
    if (e.code() == ErrorCode::kInvalidArgument) return kExitUsage;
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace taxcode::cli
