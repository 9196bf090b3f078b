#include "umt/train_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace umt {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw std::invalid_argument("config: '" + std::string(key) + "' expects a number, got '" +
                                std::string(v) + "'");
  return out;
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw std::invalid_argument("config: '" + std::string(key) +
                                "' expects a nonnegative integer, got '" + std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: '" + std::string(key) + "' expects true/false, got '" +
                              std::string(v) + "'");
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void TrainConfig::validate() const {
  if (alpha1 < 0 || alpha2 < 0 || alpha3 < 0)
    throw std::invalid_argument("config: scaling factors must be nonnegative");
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("config: tau must lie in [0,1]");
  noise.validate();
  schema.validate();
  if (batch == 0) throw std::invalid_argument("config: batch must be positive");
  if (!(adam.lr > 0)) throw std::invalid_argument("config: lr must be positive");
  model_config(kFirstCorpusId + 1).validate();
}

ModelConfig TrainConfig::model_config(std::size_t vocab_size) const {
  ModelConfig c;
  c.vocab_size = vocab_size;
  c.d_model = d_model;
  c.layers = layers;
  c.heads = heads;
  c.ffn_dim = ffn_dim;
  c.max_len = max_len;
  return c;
}

TrainConfig TrainConfig::parse(std::string_view text) {
  TrainConfig c;
  using Setter = std::function<void(std::string_view, std::string_view)>;
  auto size_setter = [](std::size_t& field) -> Setter {
    return [&field](std::string_view k, std::string_view v) {
      field = static_cast<std::size_t>(parse_uint(k, v));
    };
  };
  auto double_setter = [](double& field) -> Setter {
    return [&field](std::string_view k, std::string_view v) { field = parse_double(k, v); };
  };
  const std::map<std::string, Setter, std::less<>> setters{
      {"alpha1", double_setter(c.alpha1)},
      {"alpha2", double_setter(c.alpha2)},
      {"alpha3", double_setter(c.alpha3)},
      {"tau", double_setter(c.tau)},
      {"p_drop", double_setter(c.noise.p_drop)},
      {"p_blank", double_setter(c.noise.p_blank)},
      {"swap_window",
       [&c](std::string_view k, std::string_view v) {
         c.noise.swap_window = static_cast<int>(parse_uint(k, v));
       }},
      {"schema",
       [&c](std::string_view, std::string_view v) {
         const int pad = c.schema.pad_factor;
         c.schema = SegmentationSchema::parse(v);
         c.schema.pad_factor = pad;
       }},
      {"pad_factor",
       [&c](std::string_view k, std::string_view v) {
         c.schema.pad_factor = static_cast<int>(parse_uint(k, v));
       }},
      {"batch", size_setter(c.batch)},
      {"steps", size_setter(c.steps)},
      {"lr", double_setter(c.adam.lr)},
      {"warmup", size_setter(c.warmup)},
      {"beta1", double_setter(c.adam.beta1)},
      {"beta2", double_setter(c.adam.beta2)},
      {"eps", double_setter(c.adam.eps)},
      {"seed", [&c](std::string_view k, std::string_view v) { c.seed = parse_uint(k, v); }},
      {"enable_padding",
       [&c](std::string_view k, std::string_view v) { c.enable_padding = parse_bool(k, v); }},
      {"enable_rl",
       [&c](std::string_view k, std::string_view v) { c.enable_rl = parse_bool(k, v); }},
      {"d_model", size_setter(c.d_model)},
      {"layers", size_setter(c.layers)},
      {"heads", size_setter(c.heads)},
      {"ffn_dim", size_setter(c.ffn_dim)},
      {"max_len", size_setter(c.max_len)},
      {"gen_max_src", size_setter(c.gen_max_src)},
      {"gen_max_tgt", size_setter(c.gen_max_tgt)},
      {"checkpoint_every", size_setter(c.checkpoint_every)},
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end())
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" +
                                  std::string(key) + "'");
    it->second(key, value);
  }
  c.validate();
  return c;
}

TrainConfig TrainConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string TrainConfig::to_text() const {
  std::ostringstream os;
  os << "alpha1=" << fmt_double(alpha1) << '\n'
     << "alpha2=" << fmt_double(alpha2) << '\n'
     << "alpha3=" << fmt_double(alpha3) << '\n'
     << "tau=" << fmt_double(tau) << '\n'
     << "p_drop=" << fmt_double(noise.p_drop) << '\n'
     << "p_blank=" << fmt_double(noise.p_blank) << '\n'
     << "swap_window=" << noise.swap_window << '\n'
     << "schema=" << schema.to_string() << '\n'
     << "pad_factor=" << schema.pad_factor << '\n'
     << "batch=" << batch << '\n'
     << "steps=" << steps << '\n'
     << "lr=" << fmt_double(adam.lr) << '\n'
     << "warmup=" << warmup << '\n'
     << "beta1=" << fmt_double(adam.beta1) << '\n'
     << "beta2=" << fmt_double(adam.beta2) << '\n'
     << "eps=" << fmt_double(adam.eps) << '\n'
     << "seed=" << seed << '\n'
     << "enable_padding=" << (enable_padding ? "true" : "false") << '\n'
     << "enable_rl=" << (enable_rl ? "true" : "false") << '\n'
     << "d_model=" << d_model << '\n'
     << "layers=" << layers << '\n'
     << "heads=" << heads << '\n'
     << "ffn_dim=" << ffn_dim << '\n'
     << "max_len=" << max_len << '\n'
     << "gen_max_src=" << gen_max_src << '\n'
     << "gen_max_tgt=" << gen_max_tgt << '\n'
     << "checkpoint_every=" << checkpoint_every << '\n';
  return os.str();
}

}  // namespace umt
