#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "umt/checkpoint.hpp"
#include "umt/evaluation.hpp"
#include "umt/synth.hpp"
#include "umt/text.hpp"
#include "umt/train_config.hpp"
#include "umt/training.hpp"
#include "umt/vocab.hpp"

#ifndef UMT_VERSION
#define UMT_VERSION "unknown"
#endif

namespace umt::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct NonFiniteMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args)
      : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["argv"] = args;
    doc_["version"] = UMT_VERSION;
    doc_["inputs"] = json::object();
    doc_["outputs"] = json::array();
  }
  void input(const std::string& name, const fs::path& path) { doc_["inputs"][name] = path.string(); }
  void output(const fs::path& path) { doc_["outputs"].push_back(path.string()); }
  void set(const std::string& key, json value) { doc_[key] = std::move(value); }
  void config(const TrainConfig& c) {
    json snapshot = json::object();
    std::istringstream is(c.to_text());
    for (std::string line; std::getline(is, line);) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) snapshot[line.substr(0, eq)] = line.substr(eq + 1);
    }
    doc_["config"] = snapshot;
    doc_["seed"] = c.seed;
    doc_["flags"] = {{"padding", c.enable_padding}, {"rl", c.enable_rl}};
  }
  void write(const fs::path& dir) {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    doc_["duration_seconds"] = std::chrono::duration<double>(elapsed).count();
    const fs::path path = dir / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TextError("cannot open for writing: " + path.string());
    out << doc_.dump(2) << '\n';
    if (!out) throw TextError("write failed: " + path.string());
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw TextError("cannot create output directory " + dir.string());
}

std::vector<std::vector<std::string>> load_prose(const fs::path& path) {
  std::vector<std::vector<std::string>> out;
  for (const auto& line : read_lines(path)) out.push_back(split_chars(line));
  return out;
}

std::vector<TerseSentence> load_poems(const fs::path& path) {
  std::vector<TerseSentence> out;
  for (const auto& line : read_lines(path)) out.push_back(parse_poem(line));
  return out;
}

PoemLines encode_poem(const Vocabulary& vocab, const TerseSentence& poem) {
  PoemLines out;
  for (const auto& line : poem) out.push_back(vocab.encode(line));
  return out;
}

Batch encode_prose(const Vocabulary& vocab, const std::vector<std::vector<std::string>>& prose) {
  Batch out;
  for (const auto& p : prose) out.push_back(vocab.encode(p));
  return out;
}

Vocabulary vocab_from(const std::vector<std::vector<std::string>>& prose,
                      const std::vector<TerseSentence>& poems, std::size_t min_count = 1) {
  std::vector<std::vector<std::string>> lines = prose;
  for (const auto& p : poems) lines.push_back(flatten_sentence(p));
  return Vocabulary::build(lines, min_count);
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("UMT_SEED");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const auto seed = std::strtoull(v, &end, 10);
  if (*end) throw std::invalid_argument(std::string("UMT_SEED is not an integer: ") + v);
  return seed;
}

std::string poem_text(const Vocabulary& vocab, const std::vector<int>& ids, std::size_t line_length) {
  std::vector<std::vector<std::string>> lines;
  for (const auto& line : strip_padding(ids, line_length)) lines.push_back(vocab.decode(line));
  return format_poem(lines);
}

// Flags shared by train and ablate that adjust the loaded config.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::size_t> steps, batch;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr, tau;
  std::optional<std::string> schema;
  bool padding = false, rl = false;
  CLI::Option* padding_opt = nullptr;
  CLI::Option* rl_opt = nullptr;

  void attach(CLI::App& app, bool variant_flags) {
    app.add_option("--config", config_path, "key=value training config")->check(CLI::ExistingFile);
    app.add_option("--steps", steps, "optimizer steps");
    app.add_option("--batch", batch, "examples per side per step");
    app.add_option("--seed", seed, "overrides UMT_SEED and the config seed");
    app.add_option("--lr", lr, "Adam learning rate");
    app.add_option("--tau", tau, "repetition threshold of the RL loss");
    app.add_option("--schema", schema, "phrase segmentation, e.g. 2-2-3");
    if (variant_flags) {
      padding_opt = app.add_flag("--padding,!--no-padding", padding, "phrase-segmentation padding");
      rl_opt = app.add_flag("--rl,!--no-rl", rl, "repetition-ratio loss");
    }
  }

  TrainConfig resolve() const {
    TrainConfig c = config_path.empty() ? TrainConfig{} : TrainConfig::load(config_path);
    if (auto s = env_seed()) c.seed = *s;
    if (seed) c.seed = *seed;
    if (steps) c.steps = *steps;
    if (batch) c.batch = *batch;
    if (lr) c.adam.lr = *lr;
    if (tau) c.tau = *tau;
    if (schema) {
      const int pad = c.schema.pad_factor;
      c.schema = SegmentationSchema::parse(*schema);
      c.schema.pad_factor = pad;
    }
    if (padding_opt && padding_opt->count()) c.enable_padding = padding;
    if (rl_opt && rl_opt->count()) c.enable_rl = rl;
    c.validate();
    return c;
  }
};

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  SynthOptions options;
  std::string out;
};

void cmd_synth(const SynthArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("synth", argv);
  const auto corpora = gen_corpora(a.options);
  const fs::path dir = a.out;
  ensure_dir(dir);
  std::vector<std::string> terse, verbose, test_terse, test_verbose;
  for (const auto& s : corpora.terse) terse.push_back(format_poem(s));
  for (const auto& s : corpora.verbose) verbose.push_back(join_chars(s));
  for (const auto& s : corpora.test_terse) test_terse.push_back(format_poem(s));
  for (const auto& s : corpora.test_verbose) test_verbose.push_back(join_chars(s));
  const std::pair<const char*, const std::vector<std::string>*> files[] = {
      {"terse.txt", &terse},
      {"verbose.txt", &verbose},
      {"test.terse.txt", &test_terse},
      {"test.verbose.txt", &test_verbose}};
  for (const auto& [name, lines] : files) {
    write_lines(dir / name, *lines);
    manifest.output(dir / name);
  }
  corpora.rule.save(dir / "rule.tsv");
  manifest.output(dir / "rule.tsv");
  manifest.set("seed", a.options.seed);
  manifest.set("synth", {{"vocab_size", a.options.vocab_size},
                         {"train_n", a.options.n_train},
                         {"test_n", a.options.n_test},
                         {"repetition", a.options.repetition},
                         {"connector_p", a.options.connector_p}});
  manifest.output(dir / "manifest.json");
  manifest.write(dir);
}

// ---- vocab ----------------------------------------------------------------

struct VocabArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::size_t min_count = 1;
};

void cmd_vocab(const VocabArgs& a) {
  std::vector<std::vector<std::string>> lines;
  for (const auto& path : a.inputs)
    for (const auto& poem : load_poems(path)) lines.push_back(flatten_sentence(poem));
  const auto vocab = Vocabulary::build(lines, a.min_count);
  vocab.save(a.out);
  std::cerr << "vocabulary: " << vocab.size() << " ids (hash " << vocab.hash() << ")\n";
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  ConfigFlags flags;
  std::string src, tgt, vocab, out;
  std::size_t log_every = 100;
};

struct Prepared {
  Vocabulary vocab;
  TrainingCorpora corpora;
};

Prepared prepare(const std::string& src, const std::string& tgt, const std::string& vocab_path) {
  const auto prose = load_prose(src);
  const auto poems = load_poems(tgt);
  Prepared p{vocab_path.empty() ? vocab_from(prose, poems) : Vocabulary::load(vocab_path), {}};
  p.corpora.src = encode_prose(p.vocab, prose);
  for (const auto& poem : poems) p.corpora.tgt.push_back(encode_poem(p.vocab, poem));
  return p;
}

void write_steps(const fs::path& path, const std::vector<StepReport>& reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TextError("cannot open for writing: " + path.string());
  out.precision(9);
  out << "step,lm,bt,rl,composite,rr\n";
  for (const auto& r : reports)
    out << r.step << ',' << r.lm << ',' << r.bt << ',' << r.rl << ',' << r.composite << ','
        << r.rr << '\n';
  if (!out) throw TextError("write failed: " + path.string());
}

void cmd_train(const TrainArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("train", argv);
  const TrainConfig config = a.flags.resolve();
  const fs::path dir = a.out;
  ensure_dir(dir);
  const auto prepared = prepare(a.src, a.tgt, a.vocab);
  manifest.input("src", a.src);
  manifest.input("tgt", a.tgt);
  if (!a.vocab.empty()) manifest.input("vocab", a.vocab);
  manifest.config(config);

  prepared.vocab.save(dir / "vocab.txt");
  write_lines(dir / "config.txt", {config.to_text()});
  Seq2Seq<float> model(config.model_config(prepared.vocab.size()), config.seed);
  const auto hash = prepared.vocab.hash();

  TrainHooks hooks;
  hooks.on_step = [&](const StepReport& r) {
    if (a.log_every && r.step % a.log_every == 0)
      std::cerr << "step " << r.step << " lm " << r.lm << " bt " << r.bt << " rl " << r.rl
                << " rr " << r.rr << '\n';
  };
  hooks.on_checkpoint = [&](std::size_t step) {
    model.save(dir / ("checkpoint-" + std::to_string(step) + ".bin"), hash);
  };
  std::vector<StepReport> reports;
  try {
    reports = train(prepared.corpora, config, model, hooks);
  } catch (const NonFiniteLoss& e) {
    write_steps(dir / "steps.csv", e.reports());
    manifest.set("status", "non_finite");
    manifest.write(dir);
    throw;
  }
  write_steps(dir / "steps.csv", reports);
  model.save(dir / "checkpoint.bin", hash);
  for (const char* name : {"checkpoint.bin", "steps.csv", "vocab.txt", "config.txt", "manifest.json"})
    manifest.output(dir / name);
  manifest.set("status", "ok");
  manifest.set("vocab_hash", hash);
  manifest.write(dir);
}

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
  std::string checkpoint, vocab, config, input, output, direction = "src2tgt";
  std::size_t max_len = 0;
};

void cmd_generate(const GenerateArgs& a) {
  const TrainConfig config = a.config.empty() ? TrainConfig{} : TrainConfig::load(a.config);
  const auto vocab = Vocabulary::load(a.vocab);
  const auto model = Seq2Seq<float>::load(a.checkpoint, vocab.hash());
  const std::size_t cap = model.config().max_len - 2;
  const std::size_t max_len = a.max_len ? std::min(a.max_len, cap) : cap;
  std::vector<std::string> out;
  if (a.direction == "src2tgt") {
    for (const auto& line : read_lines(a.input)) {
      const auto ids = vocab.encode_text(line);
      const auto generated =
          strip_eos(model.generate_greedy(Side::Src, Side::Tgt, encoder_input(ids), max_len));
      out.push_back(poem_text(vocab, generated, config.schema.line_length()));
    }
  } else {
    for (const auto& line : read_lines(a.input)) {
      const auto poem = encode_poem(vocab, parse_poem(line));
      const auto input = poem_sequence(poem, config);
      const auto generated =
          strip_eos(model.generate_greedy(Side::Tgt, Side::Src, encoder_input(input), max_len));
      out.push_back(vocab.decode_text(generated));
    }
  }
  write_lines(a.output, out);
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs {
  std::string checkpoint, vocab, config, src, tgt, rule, out;
  std::string candidates, references;
};

void require_finite(const std::vector<std::pair<std::string, double>>& metrics) {
  for (const auto& [name, value] : metrics)
    if (!std::isfinite(value)) throw NonFiniteMetric("metric " + name + " is not finite");
}

void write_examples(const fs::path& path, const Vocabulary& vocab,
                    const std::vector<ExampleRow>& rows) {
  std::vector<std::string> lines{"id\tcandidate\treference\tbleu4\trr"};
  for (const auto& r : rows) {
    std::ostringstream os;
    os.precision(9);
    os << r.id << '\t' << vocab.decode_text(r.candidate) << '\t' << vocab.decode_text(r.reference)
       << '\t' << r.bleu4 << '\t' << r.rr;
    lines.push_back(os.str());
  }
  write_lines(path, lines);
}

void cmd_evaluate(const EvaluateArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("evaluate", argv);
  const fs::path dir = a.out;
  ensure_dir(dir);
  std::vector<std::pair<std::string, double>> metrics;
  if (!a.candidates.empty()) {
    const auto cand = load_poems(a.candidates);
    const auto refs = load_poems(a.references);
    if (cand.size() != refs.size())
      throw std::invalid_argument("evaluate: " + std::to_string(cand.size()) +
                                  " candidates vs " + std::to_string(refs.size()) + " references");
    std::vector<TerseSentence> both = cand;
    both.insert(both.end(), refs.begin(), refs.end());
    const auto vocab = vocab_from({}, both);
    std::vector<std::vector<int>> c, r;
    for (const auto& p : cand) c.push_back(vocab.encode(flatten_sentence(p)));
    for (const auto& p : refs) r.push_back(vocab.encode(flatten_sentence(p)));
    const auto report = bleu(c, r);
    const auto rows = score_candidates(c, r);
    double rr = 0;
    for (const auto& row : rows) rr += row.rr;
    metrics = {{"bleu", report.composite},  {"bleu1", report.bleu1},
               {"bleu2", report.bleu2},     {"bleu3", report.bleu3},
               {"bleu4", report.bleu4},     {"brevity_penalty", report.brevity_penalty},
               {"rr_candidates", rows.empty() ? 0.0 : rr / static_cast<double>(rows.size())}};
    manifest.input("candidates", a.candidates);
    manifest.input("references", a.references);
    write_examples(dir / "examples.tsv", vocab, rows);
  } else {
    const TrainConfig config = a.config.empty() ? TrainConfig{} : TrainConfig::load(a.config);
    const auto vocab = Vocabulary::load(a.vocab);
    const auto model = Seq2Seq<float>::load(a.checkpoint, vocab.hash());
    const auto prose = load_prose(a.src);
    const auto poems = load_poems(a.tgt);
    if (prose.size() != poems.size())
      throw std::invalid_argument("evaluate: " + std::to_string(prose.size()) +
                                  " source lines vs " + std::to_string(poems.size()) + " poems");
    EvalOptions options;
    options.padding = config.enable_padding;
    options.schema = config.schema;
    if (!a.rule.empty()) options.rule = SynthRule::load(a.rule).table(vocab);
    std::vector<PoemLines> encoded;
    for (const auto& p : poems) encoded.push_back(encode_poem(vocab, p));
    const auto report = evaluate_model(model, encode_prose(vocab, prose), encoded, options);
    metrics = report.metrics();
    manifest.config(config);
    manifest.input("checkpoint", a.checkpoint);
    manifest.input("src", a.src);
    manifest.input("tgt", a.tgt);
    write_examples(dir / "examples.tsv", vocab, report.rows);
  }
  write_metrics_csv(dir / "metrics.csv", metrics);
  for (const char* name : {"metrics.csv", "examples.tsv", "manifest.json"}) manifest.output(dir / name);
  require_finite(metrics);
  manifest.write(dir);
}

// ---- ablate ---------------------------------------------------------------

struct AblateArgs {
  std::string study;
  ConfigFlags flags;
  std::string src, tgt, test_src, test_tgt, rule, out;
};

struct Variant {
  std::string name;
  TrainConfig config;
};

void cmd_ablate(const AblateArgs& a, const std::vector<std::string>& argv) {
  Manifest manifest("ablate " + a.study, argv);
  const TrainConfig base = a.flags.resolve();
  const fs::path dir = a.out;
  ensure_dir(dir);
  const auto prepared = prepare(a.src, a.tgt, "");
  const auto test_prose = load_prose(a.test_src);
  const auto test_poems = load_poems(a.test_tgt);
  if (test_prose.size() != test_poems.size())
    throw std::invalid_argument("ablate: misaligned test set");
  const auto test_src = encode_prose(prepared.vocab, test_prose);
  std::vector<PoemLines> test_tgt;
  for (const auto& p : test_poems) test_tgt.push_back(encode_poem(prepared.vocab, p));
  std::optional<ExpansionTable> rule;
  if (!a.rule.empty()) rule = SynthRule::load(a.rule).table(prepared.vocab);

  std::vector<Variant> variants;
  if (a.study == "schemas") {
    for (const char* s : {"2-2-3", "2-3-2", "3-2-2"}) {
      TrainConfig c = base;
      c.enable_padding = true;
      c.schema.segments = SegmentationSchema::parse(s).segments;
      variants.push_back({s, c});
    }
  } else {
    const std::pair<const char*, std::pair<bool, bool>> table[] = {
        {"naive", {false, false}},
        {"anti_ot", {false, true}},
        {"anti_ut", {true, false}},
        {"anti_ot_ut", {true, true}}};
    for (const auto& [name, flags] : table) {
      TrainConfig c = base;
      c.enable_padding = flags.first;
      c.enable_rl = flags.second;
      variants.push_back({name, c});
    }
  }

  const bool schemas = a.study == "schemas";
  std::vector<std::string> rows{schemas ? "schema,perplexity,bleu"
                                        : "variant,perplexity,bleu,rr,coverage"};
  for (const auto& v : variants) {
    std::cerr << "== " << v.name << '\n';
    Seq2Seq<float> model(v.config.model_config(prepared.vocab.size()), v.config.seed);
    train(prepared.corpora, v.config, model);
    const fs::path sub = dir / v.name;
    ensure_dir(sub);
    model.save(sub / "checkpoint.bin", prepared.vocab.hash());
    write_lines(sub / "config.txt", {v.config.to_text()});
    EvalOptions options;
    options.padding = v.config.enable_padding;
    options.schema = v.config.schema;
    options.rule = rule;
    const auto report = evaluate_model(model, test_src, test_tgt, options);
    write_metrics_csv(sub / "metrics.csv", report.metrics());
    require_finite(report.metrics());
    std::ostringstream row;
    row.precision(6);
    row << v.name << ',' << report.ppl_src2tgt << ',' << report.bleu.composite;
    if (!schemas)
      row << ',' << report.rr_expansion << ','
          << (report.has_coverage ? report.coverage.total : std::nan(""));
    rows.push_back(row.str());
    std::cerr << rows.back() << '\n';
    manifest.output(sub / "checkpoint.bin");
    manifest.output(sub / "metrics.csv");
  }
  prepared.vocab.save(dir / "vocab.txt");
  write_lines(dir / "comparison.csv", rows);
  for (const char* name : {"vocab.txt", "comparison.csv", "manifest.json"}) manifest.output(dir / name);
  manifest.config(base);
  manifest.input("src", a.src);
  manifest.input("tgt", a.tgt);
  manifest.input("test_src", a.test_src);
  manifest.input("test_tgt", a.test_tgt);
  manifest.write(dir);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Unsupervised prose-to-poem translation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(UMT_VERSION));

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "generate a synthetic terse/verbose corpus pair");
  s->add_option("--vocab-size", synth.options.vocab_size, "terse vocabulary size (>= 20)");
  s->add_option("--train-n", synth.options.n_train, "training sentences per side (>= 500)");
  s->add_option("--test-n", synth.options.n_test, "aligned test pairs");
  s->add_option("--seed", synth.options.seed);
  s->add_option("--repetition", synth.options.repetition, "target terse repetition ratio");
  s->add_option("--connector-p", synth.options.connector_p, "connector probability");
  s->add_option("--out", synth.out)->required();

  VocabArgs vocab;
  auto* v = app.add_subcommand("vocab", "build a vocabulary from corpus files");
  v->add_option("--input", vocab.inputs)->required()->check(CLI::ExistingFile);
  v->add_option("--out", vocab.out)->required();
  v->add_option("--min-count", vocab.min_count);

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "train a model");
  tr.flags.attach(*t, true);
  t->add_option("--src", tr.src, "verbose corpus")->required();
  t->add_option("--tgt", tr.tgt, "poem corpus, lines joined by '|'")->required();
  t->add_option("--vocab", tr.vocab, "vocabulary file (default: built from the corpora)");
  t->add_option("--out", tr.out)->required();
  t->add_option("--log-every", tr.log_every);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "translate a file line by line");
  g->add_option("--checkpoint", gen.checkpoint)->required();
  g->add_option("--vocab", gen.vocab)->required();
  g->add_option("--config", gen.config, "training config (padding and schema)");
  g->add_option("--input", gen.input)->required();
  g->add_option("--output", gen.output)->required();
  g->add_option("--direction", gen.direction)->check(CLI::IsMember({"src2tgt", "tgt2src"}));
  g->add_option("--max-len", gen.max_len);

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "score a model on aligned pairs");
  e->add_option("--checkpoint", ev.checkpoint);
  e->add_option("--vocab", ev.vocab);
  e->add_option("--config", ev.config);
  e->add_option("--src", ev.src, "aligned verbose lines");
  e->add_option("--tgt", ev.tgt, "aligned poems");
  e->add_option("--rule", ev.rule, "synthetic rule file for coverage");
  e->add_option("--candidates", ev.candidates, "score this poem file instead of a model");
  e->add_option("--references", ev.references);
  e->add_option("--out", ev.out)->required();

  AblateArgs ab;
  auto* a = app.add_subcommand("ablate", "train and score a family of variants");
  a->add_option("study", ab.study)->required()->check(CLI::IsMember({"schemas", "variants"}));
  ab.flags.attach(*a, false);
  a->add_option("--src", ab.src)->required();
  a->add_option("--tgt", ab.tgt)->required();
  a->add_option("--test-src", ab.test_src)->required();
  a->add_option("--test-tgt", ab.test_tgt)->required();
  a->add_option("--rule", ab.rule);
  a->add_option("--out", ab.out)->required();

  std::vector<std::string> rest(args.rbegin(), args.rend() - 1);  // CLI11 wants reversed argv
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& err) {
    return app.exit(err, std::cout, std::cerr) == 0 ? kOk : kUsage;
  }

  try {
    if (s->parsed()) cmd_synth(synth, args);
    else if (v->parsed()) cmd_vocab(vocab);
    else if (t->parsed()) cmd_train(tr, args);
    else if (g->parsed()) cmd_generate(gen);
    else if (a->parsed()) cmd_ablate(ab, args);
    else if (e->parsed()) {
      const bool text_mode = !ev.candidates.empty() || !ev.references.empty();
      if (text_mode && (ev.candidates.empty() || ev.references.empty()))
        throw std::invalid_argument("evaluate: --candidates and --references go together");
      if (!text_mode && (ev.checkpoint.empty() || ev.vocab.empty() || ev.src.empty() || ev.tgt.empty()))
        throw std::invalid_argument("evaluate: needs --checkpoint --vocab --src --tgt");
      cmd_evaluate(ev, args);
    }
  } catch (const NonFiniteLoss& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kNonFinite;
  } catch (const NonFiniteMetric& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kNonFinite;
  } catch (const TextError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kIoError;
  } catch (const CheckpointError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kIoError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace umt::cli
