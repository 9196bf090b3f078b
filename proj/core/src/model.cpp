#include "umt/model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Core>

namespace umt {

void ModelConfig::validate() const {
  if (vocab_size <= static_cast<std::size_t>(kFirstCorpusId))
    throw std::invalid_argument("vocab_size must exceed the reserved ids");
  if (d_model == 0 || layers == 0 || heads == 0 || ffn_dim == 0 || max_len < 2)
    throw std::invalid_argument("model dimensions must be positive");
  if (d_model % heads != 0) throw std::invalid_argument("d_model must be divisible by heads");
}

ModelConfig model_config_from(const CheckpointHeader& h) {
  ModelConfig c;
  c.vocab_size = h.vocab_size;
  c.d_model = h.d_model;
  c.layers = h.layers;
  c.heads = h.heads;
  c.ffn_dim = h.ffn_dim;
  c.max_len = h.max_len;
  return c;
}

std::vector<int> encoder_input(std::span<const int> content) {
  std::vector<int> out(content.begin(), content.end());
  out.push_back(kEos);
  return out;
}

std::vector<std::vector<int>> encoder_inputs(const std::vector<std::vector<int>>& contents) {
  std::vector<std::vector<int>> out;
  out.reserve(contents.size());
  for (const auto& c : contents) out.push_back(encoder_input(c));
  return out;
}

std::vector<int> decoder_sequence(std::span<const int> content) {
  std::vector<int> out;
  out.reserve(content.size() + 2);
  out.push_back(kBos);
  out.insert(out.end(), content.begin(), content.end());
  out.push_back(kEos);
  return out;
}

std::vector<int> strip_eos(std::span<const int> generated) {
  std::vector<int> out;
  for (int id : generated) {
    if (id == kEos) break;
    out.push_back(id);
  }
  return out;
}

std::size_t counted_targets(std::span<const int> target_content, bool skip_segpad) {
  std::size_t n = 1;  // EOS
  for (int id : target_content)
    if (!(skip_segpad && id == kSegPad)) ++n;
  return n;
}

namespace {

constexpr double kMaskValue = -1e9;

template <class Real>
Linear<Real> make_linear(std::size_t in, std::size_t out, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::uniform_real_distribution<double> u(-bound, bound);
  std::vector<Real> w(in * out);
  for (auto& x : w) x = static_cast<Real>(u(rng));
  return {Tensor<Real>::from({in, out}, std::move(w), true),
          Tensor<Real>::zeros({out}, true)};
}

template <class Real>
LayerNormParams<Real> make_ln(std::size_t d) {
  return {Tensor<Real>::full({d}, Real(1), true), Tensor<Real>::zeros({d}, true)};
}

template <class Real>
AttentionParams<Real> make_attention(std::size_t d, std::mt19937_64& rng) {
  AttentionParams<Real> a;
  a.q = make_linear<Real>(d, d, rng);
  a.k = make_linear<Real>(d, d, rng);
  a.v = make_linear<Real>(d, d, rng);
  a.o = make_linear<Real>(d, d, rng);
  return a;
}

template <class Real>
Tensor<Real> linear(const Tensor<Real>& x, const Linear<Real>& l) {
  return add(matmul(x, l.weight), l.bias);
}

template <class Real>
Tensor<Real> ln(const Tensor<Real>& x, const LayerNormParams<Real>& p) {
  return layer_norm(x, p.gamma, p.beta);
}

template <class Real>
Tensor<Real> feed_forward(const Tensor<Real>& x, const Linear<Real>& ff1, const Linear<Real>& ff2) {
  return linear(relu(linear(x, ff1)), ff2);
}

// Multi-head attention over already projected keys/values. `mask` is an
// additive (queries, keys) tensor or undefined.
template <class Real>
Tensor<Real> attend(const AttentionParams<Real>& p, const Tensor<Real>& query_in,
                    const Tensor<Real>& keys, const Tensor<Real>& values,
                    const Tensor<Real>& mask, std::size_t heads) {
  const Tensor<Real> q = linear(query_in, p.q);
  const std::size_t d = q.dim(1);
  const std::size_t dh = d / heads;
  const Real inv_sqrt = Real(1) / std::sqrt(static_cast<Real>(dh));
  std::vector<Tensor<Real>> outs;
  outs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const bool whole = heads == 1;
    Tensor<Real> qh = whole ? q : slice(q, 1, h * dh, (h + 1) * dh);
    Tensor<Real> kh = whole ? keys : slice(keys, 1, h * dh, (h + 1) * dh);
    Tensor<Real> vh = whole ? values : slice(values, 1, h * dh, (h + 1) * dh);
    Tensor<Real> scores = scale(matmul(qh, transpose(kh)), inv_sqrt);
    if (mask.defined()) scores = add(scores, mask);
    outs.push_back(matmul(softmax(scores, 1), vh));
  }
  Tensor<Real> merged = heads == 1 ? outs.front() : concat(outs, 1);
  return linear(merged, p.o);
}

// Additive mask hiding invalid keys from every query row; undefined when
// all keys are valid.
template <class Real>
Tensor<Real> key_mask(const std::vector<std::uint8_t>& valid, std::size_t rows) {
  bool any_invalid = false;
  for (auto v : valid) any_invalid = any_invalid || !v;
  if (!any_invalid) return {};
  std::vector<Real> m(rows * valid.size(), Real(0));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < valid.size(); ++j)
      if (!valid[j]) m[r * valid.size() + j] = static_cast<Real>(kMaskValue);
  return Tensor<Real>::from({rows, valid.size()}, std::move(m));
}

template <class Real>
Tensor<Real> causal_mask(std::size_t n) {
  std::vector<Real> m(n * n, Real(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = static_cast<Real>(kMaskValue);
  return Tensor<Real>::from({n, n}, std::move(m));
}

void check_ids(std::span<const int> ids, std::size_t vocab, std::size_t max_len,
               const char* what) {
  if (ids.empty()) throw std::invalid_argument(std::string(what) + ": empty sequence");
  if (ids.size() > max_len)
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(ids.size()) +
                                " exceeds max_len " + std::to_string(max_len));
  for (int id : ids)
    if (id < 0 || static_cast<std::size_t>(id) >= vocab)
      throw std::invalid_argument(std::string(what) + ": id " + std::to_string(id) +
                                  " outside vocabulary");
}

template <class Real>
void push_linear(std::vector<NamedParameter<Real>>& out, const std::string& name,
                 const Linear<Real>& l) {
  out.push_back({name + ".weight", l.weight});
  out.push_back({name + ".bias", l.bias});
}

template <class Real>
void push_ln(std::vector<NamedParameter<Real>>& out, const std::string& name,
             const LayerNormParams<Real>& p) {
  out.push_back({name + ".gamma", p.gamma});
  out.push_back({name + ".beta", p.beta});
}

template <class Real>
void push_attention(std::vector<NamedParameter<Real>>& out, const std::string& name,
                    const AttentionParams<Real>& a) {
  push_linear(out, name + ".q", a.q);
  push_linear(out, name + ".k", a.k);
  push_linear(out, name + ".v", a.v);
  push_linear(out, name + ".o", a.o);
}

}  // namespace

template <class Real>
Seq2Seq<Real>::Seq2Seq(ModelConfig config, std::uint64_t seed) : config_(config) {
  config_.validate();
  const std::size_t d = config_.d_model;
  std::mt19937_64 rng(seed);
  {
    const double bound = 1.0 / std::sqrt(static_cast<double>(d));
    std::uniform_real_distribution<double> u(-bound, bound);
    std::vector<Real> e(config_.vocab_size * d);
    for (auto& x : e) x = static_cast<Real>(u(rng));
    embedding_ = Tensor<Real>::from({config_.vocab_size, d}, std::move(e), true);
  }
  {
    std::vector<Real> pe(config_.max_len * d);
    for (std::size_t pos = 0; pos < config_.max_len; ++pos)
      for (std::size_t i = 0; i < d; i += 2) {
        const double freq = std::pow(10000.0, -static_cast<double>(i) / static_cast<double>(d));
        pe[pos * d + i] = static_cast<Real>(std::sin(static_cast<double>(pos) * freq));
        if (i + 1 < d)
          pe[pos * d + i + 1] = static_cast<Real>(std::cos(static_cast<double>(pos) * freq));
      }
    positions_ = Tensor<Real>::from({config_.max_len, d}, std::move(pe));
  }
  for (int s = 0; s < 2; ++s) {
    auto& enc = encoders_[s];
    for (std::size_t l = 0; l < config_.layers; ++l) {
      EncoderLayer<Real> layer;
      layer.ln_attn = make_ln<Real>(d);
      layer.self_attn = make_attention<Real>(d, rng);
      layer.ln_ffn = make_ln<Real>(d);
      layer.ff1 = make_linear<Real>(d, config_.ffn_dim, rng);
      layer.ff2 = make_linear<Real>(config_.ffn_dim, d, rng);
      enc.layers.push_back(std::move(layer));
    }
    enc.ln_final = make_ln<Real>(d);
  }
  for (int s = 0; s < 2; ++s) {
    auto& dec = decoders_[s];
    for (std::size_t l = 0; l < config_.layers; ++l) {
      DecoderLayer<Real> layer;
      layer.ln_self = make_ln<Real>(d);
      layer.self_attn = make_attention<Real>(d, rng);
      layer.ln_cross = make_ln<Real>(d);
      layer.cross_attn = make_attention<Real>(d, rng);
      layer.ln_ffn = make_ln<Real>(d);
      layer.ff1 = make_linear<Real>(d, config_.ffn_dim, rng);
      layer.ff2 = make_linear<Real>(config_.ffn_dim, d, rng);
      dec.layers.push_back(std::move(layer));
    }
    dec.ln_final = make_ln<Real>(d);
  }
}

template <class Real>
HiddenState<Real> Seq2Seq<Real>::encode(Side side, std::span<const int> ids) const {
  check_ids(ids, config_.vocab_size, config_.max_len, "encode");
  const std::size_t n = ids.size();
  const Real emb_scale = std::sqrt(static_cast<Real>(config_.d_model));
  Tensor<Real> x = add(scale(umt::embedding(embedding_, ids), emb_scale),
                       slice(positions_, 0, 0, n));
  HiddenState<Real> hidden;
  hidden.valid.resize(n);
  for (std::size_t i = 0; i < n; ++i) hidden.valid[i] = ids[i] != kPad;
  const Tensor<Real> mask = key_mask<Real>(hidden.valid, n);
  const auto& enc = encoders_[static_cast<int>(side)];
  for (const auto& layer : enc.layers) {
    Tensor<Real> h = ln(x, layer.ln_attn);
    x = add(x, attend(layer.self_attn, h, linear(h, layer.self_attn.k),
                      linear(h, layer.self_attn.v), mask, config_.heads));
    h = ln(x, layer.ln_ffn);
    x = add(x, feed_forward(h, layer.ff1, layer.ff2));
  }
  hidden.states = ln(x, enc.ln_final);
  return hidden;
}

template <class Real>
Tensor<Real> Seq2Seq<Real>::decode_teacher_forced(Side side, const HiddenState<Real>& hidden,
                                                  std::span<const int> target) const {
  check_ids(target, config_.vocab_size, config_.max_len, "decode");
  if (target.front() != kBos) throw std::invalid_argument("decode: target must begin with BOS");
  if (hidden.valid.size() != hidden.states.dim(0))
    throw std::invalid_argument("decode: hidden-state mask length mismatch");
  const std::size_t n = target.size();
  const Real emb_scale = std::sqrt(static_cast<Real>(config_.d_model));
  Tensor<Real> y = add(scale(umt::embedding(embedding_, target), emb_scale),
                       slice(positions_, 0, 0, n));
  const Tensor<Real> self_mask = causal_mask<Real>(n);
  const Tensor<Real> cross_mask = key_mask<Real>(hidden.valid, n);
  const auto& dec = decoders_[static_cast<int>(side)];
  for (const auto& layer : dec.layers) {
    Tensor<Real> h = ln(y, layer.ln_self);
    y = add(y, attend(layer.self_attn, h, linear(h, layer.self_attn.k),
                      linear(h, layer.self_attn.v), self_mask, config_.heads));
    h = ln(y, layer.ln_cross);
    y = add(y, attend(layer.cross_attn, h, linear(hidden.states, layer.cross_attn.k),
                      linear(hidden.states, layer.cross_attn.v), cross_mask, config_.heads));
    h = ln(y, layer.ln_ffn);
    y = add(y, feed_forward(h, layer.ff1, layer.ff2));
  }
  return matmul(ln(y, dec.ln_final), transpose(embedding_));
}

template <class Real>
std::vector<int> Seq2Seq<Real>::generate_greedy(Side src, Side tgt, std::span<const int> src_ids,
                                                std::size_t max_len) const {
  return generate_greedy_from(src, tgt, src_ids, {}, max_len);
}

template <class Real>
std::vector<int> Seq2Seq<Real>::generate_greedy_from(Side src, Side tgt,
                                                     std::span<const int> src_ids,
                                                     std::span<const int> prefix,
                                                     std::size_t max_len) const {
  const std::vector<std::vector<int>> one{{src_ids.begin(), src_ids.end()}};
  const std::vector<std::vector<int>> prefixes{{prefix.begin(), prefix.end()}};
  return decode_batch(src, tgt, one, prefixes, max_len).front();
}

template <class Real>
std::vector<std::vector<int>> Seq2Seq<Real>::generate_greedy_batch(
    Side src, Side tgt, const std::vector<std::vector<int>>& sources, std::size_t max_len) const {
  return decode_batch(src, tgt, sources, {}, max_len);
}

namespace {

template <class Real>
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class Real>
using RowVec = Eigen::Matrix<Real, 1, Eigen::Dynamic>;

template <class Real>
Eigen::Map<const Mat<Real>> view(const Tensor<Real>& t, std::size_t rows, std::size_t cols) {
  return {t.data().data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)};
}

template <class Real>
Eigen::Map<const RowVec<Real>> row_view(const Tensor<Real>& t) {
  return {t.data().data(), static_cast<Eigen::Index>(t.size())};
}

template <class Real>
Mat<Real> apply(const Mat<Real>& x, const Linear<Real>& l) {
  const std::size_t in = l.weight.dim(0), out = l.weight.dim(1);
  Mat<Real> y = x * view(l.weight, in, out);
  y.rowwise() += row_view(l.bias);
  return y;
}

// Same arithmetic as layer_norm() (population variance, eps 1e-5).
template <class Real>
Mat<Real> normalize(const Mat<Real>& x, const LayerNormParams<Real>& p) {
  Mat<Real> y(x.rows(), x.cols());
  const auto gamma = row_view(p.gamma);
  const auto beta = row_view(p.beta);
  const auto n = static_cast<Real>(x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const Real mean = x.row(r).sum() / n;
    const auto centered = (x.row(r).array() - mean).matrix();
    const Real var = centered.squaredNorm() / n;
    const Real is = Real(1) / std::sqrt(var + Real(1e-5));
    y.row(r) = (centered * is).cwiseProduct(gamma) + beta;
  }
  return y;
}

// One query row attending over the first `count` rows of keys/values,
// skipping masked keys.
template <class Real>
void attend_row(const Real* query, const Mat<Real>& keys, const Mat<Real>& values,
                std::size_t count, const std::uint8_t* valid, std::size_t heads, Real* out) {
  const auto d = static_cast<std::size_t>(keys.cols());
  const std::size_t dh = d / heads;
  const Real inv_sqrt = Real(1) / std::sqrt(static_cast<Real>(dh));
  std::vector<Real> scores(count);
  for (std::size_t h = 0; h < heads; ++h) {
    Real mx = -std::numeric_limits<Real>::infinity();
    for (std::size_t j = 0; j < count; ++j) {
      if (valid && !valid[j]) continue;
      Real s = 0;
      const Real* k = keys.data() + j * d + h * dh;
      for (std::size_t c = 0; c < dh; ++c) s += query[h * dh + c] * k[c];
      scores[j] = s * inv_sqrt;
      mx = std::max(mx, scores[j]);
    }
    Real total = 0;
    for (std::size_t j = 0; j < count; ++j) {
      scores[j] = (valid && !valid[j]) ? Real(0) : std::exp(scores[j] - mx);
      total += scores[j];
    }
    Real* o = out + h * dh;
    std::fill(o, o + dh, Real(0));
    for (std::size_t j = 0; j < count; ++j) {
      if (scores[j] == Real(0)) continue;
      const Real w = scores[j] / total;
      const Real* v = values.data() + j * d + h * dh;
      for (std::size_t c = 0; c < dh; ++c) o[c] += w * v[c];
    }
  }
}

}  // namespace

// Decodes all sources together: each step stacks the rows of the
// unfinished sequences so the projections run as one matrix product.
template <class Real>
std::vector<std::vector<int>> Seq2Seq<Real>::decode_batch(
    Side src, Side tgt, const std::vector<std::vector<int>>& sources,
    const std::vector<std::vector<int>>& prefixes, std::size_t max_len) const {
  NoGradGuard no_grad;
  max_len = std::min(max_len, config_.max_len);
  const std::size_t n = sources.size();
  const std::size_t d = config_.d_model, heads = config_.heads, vocab = config_.vocab_size;
  const auto& dec = decoders_[static_cast<int>(tgt)];
  const std::size_t layers = dec.layers.size();

  struct State {
    std::vector<Mat<Real>> self_k, self_v, cross_k, cross_v;
    std::vector<std::uint8_t> valid;
    std::vector<int> out;
    int token = kBos;
  };
  std::vector<State> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    const HiddenState<Real> hidden = encode(src, sources[i]);
    const Mat<Real> memory = view(hidden.states, hidden.states.dim(0), d);
    auto& st = states[i];
    st.valid = hidden.valid;
    for (const auto& layer : dec.layers) {
      st.cross_k.push_back(apply(memory, layer.cross_attn.k));
      st.cross_v.push_back(apply(memory, layer.cross_attn.v));
      st.self_k.emplace_back(max_len, d);
      st.self_v.emplace_back(max_len, d);
    }
  }

  const auto embedding = view(embedding_, vocab, d);
  const auto positions = view(positions_, config_.max_len, d);
  const Real emb_scale = std::sqrt(static_cast<Real>(d));
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;

  for (std::size_t pos = 0; pos < max_len && !active.empty(); ++pos) {
    const auto rows = static_cast<Eigen::Index>(active.size());
    Mat<Real> y(rows, d);
    for (Eigen::Index r = 0; r < rows; ++r)
      y.row(r) = embedding.row(states[active[r]].token) * emb_scale + positions.row(pos);
    Mat<Real> mixed(rows, d);
    for (std::size_t l = 0; l < layers; ++l) {
      const auto& layer = dec.layers[l];
      Mat<Real> h = normalize(y, layer.ln_self);
      const Mat<Real> q = apply(h, layer.self_attn.q);
      const Mat<Real> k = apply(h, layer.self_attn.k);
      const Mat<Real> v = apply(h, layer.self_attn.v);
      for (Eigen::Index r = 0; r < rows; ++r) {
        auto& st = states[active[r]];
        st.self_k[l].row(pos) = k.row(r);
        st.self_v[l].row(pos) = v.row(r);
        attend_row(q.row(r).data(), st.self_k[l], st.self_v[l], pos + 1, nullptr, heads,
                   mixed.row(r).data());
      }
      y += apply(mixed, layer.self_attn.o);

      h = normalize(y, layer.ln_cross);
      const Mat<Real> cq = apply(h, layer.cross_attn.q);
      for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& st = states[active[r]];
        attend_row(cq.row(r).data(), st.cross_k[l], st.cross_v[l], st.valid.size(),
                   st.valid.data(), heads, mixed.row(r).data());
      }
      y += apply(mixed, layer.cross_attn.o);

      h = normalize(y, layer.ln_ffn);
      y += apply(Mat<Real>(apply(h, layer.ff1).cwiseMax(Real(0))), layer.ff2);
    }

    Mat<Real> logits;
    bool need_logits = false;
    for (std::size_t i : active)
      need_logits = need_logits || i >= prefixes.size() || pos >= prefixes[i].size();
    if (need_logits) logits = normalize(y, dec.ln_final) * embedding.transpose();

    std::vector<std::size_t> still;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const std::size_t i = active[r];
      auto& st = states[i];
      int next = -1;
      if (i < prefixes.size() && pos < prefixes[i].size()) {
        next = prefixes[i][pos];
      } else {
        Real best = -std::numeric_limits<Real>::infinity();
        for (std::size_t j = 0; j < vocab; ++j) {
          const int id = static_cast<int>(j);
          if (id == kPad || id == kBos || id == kBlank) continue;
          if (logits(r, static_cast<Eigen::Index>(j)) > best || next < 0) {
            best = logits(r, static_cast<Eigen::Index>(j));
            next = id;
          }
        }
      }
      st.out.push_back(next);
      st.token = next;
      if (next != kEos) still.push_back(i);
    }
    active = std::move(still);
  }

  std::vector<std::vector<int>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::move(states[i].out);
  return out;
}

template <class Real>
std::vector<NamedParameter<Real>> Seq2Seq<Real>::parameters() const {
  std::vector<NamedParameter<Real>> out;
  out.push_back({"embedding", embedding_});
  for (int s = 0; s < 2; ++s) {
    const std::string side = side_name(static_cast<Side>(s));
    const auto& enc = encoders_[s];
    for (std::size_t l = 0; l < enc.layers.size(); ++l) {
      const std::string base = "encoder." + side + ".layers." + std::to_string(l);
      const auto& layer = enc.layers[l];
      push_ln(out, base + ".ln_attn", layer.ln_attn);
      push_attention(out, base + ".self_attn", layer.self_attn);
      push_ln(out, base + ".ln_ffn", layer.ln_ffn);
      push_linear(out, base + ".ff1", layer.ff1);
      push_linear(out, base + ".ff2", layer.ff2);
    }
    push_ln(out, "encoder." + side + ".ln_final", enc.ln_final);
  }
  for (int s = 0; s < 2; ++s) {
    const std::string side = side_name(static_cast<Side>(s));
    const auto& dec = decoders_[s];
    for (std::size_t l = 0; l < dec.layers.size(); ++l) {
      const std::string base = "decoder." + side + ".layers." + std::to_string(l);
      const auto& layer = dec.layers[l];
      push_ln(out, base + ".ln_self", layer.ln_self);
      push_attention(out, base + ".self_attn", layer.self_attn);
      push_ln(out, base + ".ln_cross", layer.ln_cross);
      push_attention(out, base + ".cross_attn", layer.cross_attn);
      push_ln(out, base + ".ln_ffn", layer.ln_ffn);
      push_linear(out, base + ".ff1", layer.ff1);
      push_linear(out, base + ".ff2", layer.ff2);
    }
    push_ln(out, "decoder." + side + ".ln_final", dec.ln_final);
  }
  return out;
}

template <class Real>
std::size_t Seq2Seq<Real>::count_params() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p.tensor.size();
  return n;
}

template <class Real>
CheckpointHeader Seq2Seq<Real>::checkpoint_header(std::uint64_t vocab_hash) const {
  CheckpointHeader h;
  h.vocab_size = static_cast<std::uint32_t>(config_.vocab_size);
  h.d_model = static_cast<std::uint32_t>(config_.d_model);
  h.layers = static_cast<std::uint32_t>(config_.layers);
  h.heads = static_cast<std::uint32_t>(config_.heads);
  h.ffn_dim = static_cast<std::uint32_t>(config_.ffn_dim);
  h.max_len = static_cast<std::uint32_t>(config_.max_len);
  h.vocab_hash = vocab_hash;
  return h;
}

template <class Real>
void Seq2Seq<Real>::save(const std::filesystem::path& path, std::uint64_t vocab_hash) const {
  save_checkpoint(path, checkpoint_header(vocab_hash), parameters());
}

template <class Real>
Seq2Seq<Real> Seq2Seq<Real>::load(const std::filesystem::path& path,
                                  std::optional<std::uint64_t> expected_vocab_hash) {
  const Checkpoint ck = load_checkpoint(path);
  if (expected_vocab_hash && *expected_vocab_hash != ck.header.vocab_hash)
    throw CheckpointError("vocabulary hash mismatch: checkpoint was trained with a different "
                          "vocabulary");
  Seq2Seq model(model_config_from(ck.header), 0);
  auto params = model.parameters();
  assign_parameters(ck, params);
  return model;
}

template <class Real>
Tensor<Real> sequence_nll(const Seq2Seq<Real>& model, Side src, std::span<const int> source_content,
                          Side tgt, std::span<const int> target_content, Reduction reduction,
                          bool skip_segpad) {
  const auto hidden = model.encode(src, encoder_input(source_content));
  const auto seq = decoder_sequence(target_content);
  const Tensor<Real> logits = model.decode_teacher_forced(tgt, hidden, seq);
  std::vector<int> targets(seq.begin() + 1, seq.end());
  targets.push_back(kPad);
  if (skip_segpad)
    for (auto& t : targets)
      if (t == kSegPad) t = kPad;
  return cross_entropy(logits, targets, kPad, reduction);
}

template class Seq2Seq<float>;
template class Seq2Seq<double>;
template Tensor<float> sequence_nll(const Seq2Seq<float>&, Side, std::span<const int>, Side,
                                    std::span<const int>, Reduction, bool);
template Tensor<double> sequence_nll(const Seq2Seq<double>&, Side, std::span<const int>, Side,
                                     std::span<const int>, Reduction, bool);

}  // namespace umt
