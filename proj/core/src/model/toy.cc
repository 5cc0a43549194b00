// Copyright 2026 The Outlier Fusion Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ofuse/model/toy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "ofuse/error.h"
#include "ofuse/eval/split.h"
#include "ofuse/numeric/conv2d.h"
#include "ofuse/numeric/rng.h"

namespace ofuse {
namespace {

AttentionConfig EffectiveAttention(const ToyModelConfig& cfg) {
  AttentionConfig a = *cfg.attention;
  if (a.placement == AttentionPlacement::kSelf) a.reduction = 1;
  return a;
}

Tensor3 ImageTensor(const ImageArray& image) {
  Tensor3 t(1, image.height(), image.width());
  std::copy(image.pixels().begin(), image.pixels().end(), t.data.begin());
  return t;
}

struct BlockCache {
  Tensor3 input;
  Tensor3 pre;  // convolution plus bias, before ReLU
};

struct ForwardCache {
  Tensor3 image;
  std::array<BlockCache, 3> blocks;
  Tensor3 features;  // after the blocks (and traditional attention)
  Tensor3 pre_attention;
  std::vector<double> pooled;
  std::vector<std::size_t> argmax;
  std::vector<double> probs;
};

Tensor3 AvgPool2(const Tensor3& x) {
  Tensor3 out(x.channels, x.height / 2, x.width / 2);
  for (std::size_t c = 0; c < out.channels; ++c)
    for (std::size_t y = 0; y < out.height; ++y)
      for (std::size_t xx = 0; xx < out.width; ++xx)
        out.at(c, y, xx) = 0.25 * (x.at(c, 2 * y, 2 * xx) + x.at(c, 2 * y, 2 * xx + 1) +
                                   x.at(c, 2 * y + 1, 2 * xx) + x.at(c, 2 * y + 1, 2 * xx + 1));
  return out;
}

ForwardCache Forward(const ToyModelConfig& cfg, const ToyParams& p, const ImageArray& image) {
  ForwardCache fc;
  fc.image = ImageTensor(image);
  Tensor3 x = fc.image;
  const bool self = cfg.attention && cfg.attention->placement == AttentionPlacement::kSelf;
  if (self) x = MultiHeadAttention(x, *p.attention).output;

  for (std::size_t b = 0; b < 3; ++b) {
    BlockCache& bc = fc.blocks[b];
    bc.input = x;
    bc.pre = Conv2d(x, p.conv[b], Padding::kSame);
    for (std::size_t c = 0; c < bc.pre.channels; ++c)
      for (double& v : bc.pre.channel(c)) v += p.conv_bias[b][c];
    Tensor3 act = bc.pre;
    for (double& v : act.data) v = std::max(0.0, v);
    x = AvgPool2(act);
  }

  fc.pre_attention = x;
  if (cfg.attention && !self) x = MultiHeadAttention(x, *p.attention).output;
  fc.features = x;

  if (cfg.pooling == PoolingKind::kDgmp) {
    fc.pooled = DgmpForward(x, cfg.lambda).xi;
  } else {
    for (std::size_t c = 0; c < x.channels; ++c) {
      const auto plane = x.channel(c);
      const auto it = std::max_element(plane.begin(), plane.end());
      fc.pooled.push_back(*it);
      fc.argmax.push_back(static_cast<std::size_t>(it - plane.begin()));
    }
  }

  const std::size_t k = cfg.classes, d = fc.pooled.size();
  std::vector<double> logits(p.classifier_bias);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t c = 0; c < d; ++c) logits[j] += p.classifier[j * d + c] * fc.pooled[c];
  for (double z : logits) Require(std::isfinite(z), ErrorKind::kNumeric, "non-finite logits");
  fc.probs = Softmax(logits);
  return fc;
}

ToyParams ZeroLike(const ToyParams& p) {
  ToyParams z = p;
  z.ForEachTensor([](const std::string&, const TensorShape&, std::span<double> v) {
    std::fill(v.begin(), v.end(), 0.0);
  });
  return z;
}

// Accumulates scale * d(loss)/d(params) into g.
void Backward(const ToyModelConfig& cfg, const ToyParams& p, const ForwardCache& fc,
              std::span<const double> dlogits, double scale, ToyParams& g) {
  const std::size_t k = cfg.classes, d = fc.pooled.size();
  std::vector<double> dpooled(d, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    const double dz = scale * dlogits[j];
    g.classifier_bias[j] += dz;
    for (std::size_t c = 0; c < d; ++c) {
      g.classifier[j * d + c] += dz * fc.pooled[c];
      dpooled[c] += p.classifier[j * d + c] * dz;
    }
  }

  Tensor3 dx;
  if (cfg.pooling == PoolingKind::kDgmp) {
    dx = DgmpBackward(fc.features, cfg.lambda, dpooled);
  } else {
    dx = Tensor3(fc.features.channels, fc.features.height, fc.features.width);
    for (std::size_t c = 0; c < d; ++c) dx.channel(c)[fc.argmax[c]] = dpooled[c];
  }

  const bool self = cfg.attention && cfg.attention->placement == AttentionPlacement::kSelf;
  const auto add_attention = [&](MultiHeadParams& from) {
    std::vector<std::span<double>> dst;
    g.attention->ForEachTensor(
        [&](const std::string&, const TensorShape&, std::span<double> v) { dst.push_back(v); });
    std::size_t i = 0;
    from.ForEachTensor([&](const std::string&, const TensorShape&, std::span<double> v) {
      for (std::size_t e = 0; e < v.size(); ++e) dst[i][e] += v[e];
      ++i;
    });
  };
  if (cfg.attention && !self) {
    MultiHeadGrads ag = MultiHeadAttentionBackward(fc.pre_attention, *p.attention, dx);
    add_attention(ag.params);
    dx = std::move(ag.input);
  }

  for (std::size_t b = 3; b-- > 0;) {
    const BlockCache& bc = fc.blocks[b];
    Tensor3 dpre(bc.pre.channels, bc.pre.height, bc.pre.width);
    for (std::size_t c = 0; c < dpre.channels; ++c)
      for (std::size_t y = 0; y < dpre.height; ++y)
        for (std::size_t x = 0; x < dpre.width; ++x)
          if (bc.pre.at(c, y, x) > 0.0) dpre.at(c, y, x) = 0.25 * dx.at(c, y / 2, x / 2);
    for (std::size_t c = 0; c < dpre.channels; ++c)
      for (double v : dpre.channel(c)) g.conv_bias[b][c] += v;
    Conv2dGrads cg = Conv2dBackward(bc.input, p.conv[b], Padding::kSame, dpre);
    for (std::size_t i = 0; i < cg.kernel.data.size(); ++i) g.conv[b].data[i] += cg.kernel.data[i];
    dx = std::move(cg.input);
  }

  if (self) {
    MultiHeadGrads ag = MultiHeadAttentionBackward(fc.image, *p.attention, dx);
    add_attention(ag.params);
  }
}

class Adam {
 public:
  Adam(const ToyParams& shape, const AdamConfig& cfg) : cfg_(cfg) {
    ToyParams copy = shape;
    std::size_t total = 0;
    copy.ForEachTensor(
        [&](const std::string&, const TensorShape&, std::span<double> v) { total += v.size(); });
    m_.assign(total, 0.0);
    v_.assign(total, 0.0);
  }

  // Returns false when an updated parameter is no longer finite.
  bool Step(ToyParams& params, ToyParams& grads) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, double(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, double(t_));
    std::vector<std::span<double>> gs;
    grads.ForEachTensor(
        [&](const std::string&, const TensorShape&, std::span<double> v) { gs.push_back(v); });
    std::size_t tensor = 0, flat = 0;
    bool finite = true;
    params.ForEachTensor([&](const std::string&, const TensorShape&, std::span<double> w) {
      const std::span<double> g = gs[tensor++];
      for (std::size_t i = 0; i < w.size(); ++i, ++flat) {
        m_[flat] = cfg_.beta1 * m_[flat] + (1.0 - cfg_.beta1) * g[i];
        v_[flat] = cfg_.beta2 * v_[flat] + (1.0 - cfg_.beta2) * g[i] * g[i];
        w[i] -= cfg_.learning_rate * (m_[flat] / c1) / (std::sqrt(v_[flat] / c2) + cfg_.epsilon);
        finite = finite && std::isfinite(w[i]);
      }
    });
    return finite;
  }

 private:
  AdamConfig cfg_;
  std::vector<double> m_, v_;
  std::size_t t_ = 0;
};

// One optimizer step; any numeric failure is reported with its step index.
double TakeStep(const ToyModelConfig& cfg, ToyParams& params, Adam& adam,
                std::span<const ImageArray* const> batch, std::span<const int> labels,
                const FocalLossConfig& focal, std::size_t step) {
  const std::string where = "training diverged at step " + std::to_string(step) + ": ";
  ToyLossGradient lg;
  try {
    lg = ToyBatchGradient(cfg, params, batch, labels, focal);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNumeric) throw;
    Fail(ErrorKind::kNumeric, where + e.what());
  }
  Require(std::isfinite(lg.loss), ErrorKind::kNumeric, where + "non-finite loss");
  Require(adam.Step(params, lg.grads), ErrorKind::kNumeric, where + "non-finite parameter");
  return lg.loss;
}

struct Evaluation {
  double loss = 0.0;
  MetricsReport report;
  std::vector<int> predicted;
};

Evaluation Evaluate(const ToyModelConfig& cfg, const ToyParams& p,
                    std::span<const ImageArray> images, std::span<const int> labels,
                    const FocalLossConfig& focal) {
  Evaluation ev;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::vector<double> probs = ToyPredict(cfg, p, images[i]);
    ev.loss += FocalLoss(probs, std::size_t(labels[i]), focal).loss;
    ev.predicted.push_back(int(std::max_element(probs.begin(), probs.end()) - probs.begin()));
  }
  if (!images.empty()) ev.loss /= double(images.size());
  ev.report = ReportMetrics(CountConfusion(labels, ev.predicted, cfg.classes));
  return ev;
}

TraceRow MakeRow(std::size_t epoch, const char* split, const Evaluation& ev) {
  return {epoch,
          split,
          ev.loss,
          ev.report.accuracy,
          ev.report.macro_f1,
          ev.report.macro_specificity,
          ev.report.macro_sensitivity};
}

std::string ShapeText(const TensorShape& shape) {
  std::string s;
  for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "x" : "") + std::to_string(shape[i]);
  return s;
}

}  // namespace

LabeledImages MakeTextureDataset(std::size_t n, std::size_t size, std::uint64_t seed) {
  Require(size >= 1, ErrorKind::kDomain, "image size must be positive");
  LabeledImages data;
  RngStream rng(seed, 0x7e47);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = int(i % 4);
    const double freq = rng.Uniform(0.18, 0.32);
    const double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    const double contrast = rng.Uniform(0.25, 0.45);
    ImageArray image(size, size);
    for (std::size_t y = 0; y < size; ++y) {
      for (std::size_t x = 0; x < size; ++x) {
        const double w = 2.0 * std::numbers::pi * freq;
        double s = 0.0;
        switch (label) {
          case 0: s = std::sin(w * double(y) + phase); break;
          case 1: s = std::sin(w * double(x) + phase); break;
          case 2: s = std::sin(w * double(x + y) / std::numbers::sqrt2 + phase); break;
          default: s = std::sin(w * double(x) + phase) * std::sin(w * double(y) + phase); break;
        }
        image.at(y, x) = std::clamp(0.5 + contrast * s + 0.08 * rng.Normal(), 0.0, 1.0);
      }
    }
    data.images.push_back(std::move(image));
    data.labels.push_back(label);
  }
  return data;
}

const char* PoolingName(PoolingKind kind) {
  return kind == PoolingKind::kDgmp ? "dgmp" : "max";
}

void ToyModelConfig::Validate() const {
  Require(image_size >= 8 && image_size % 8 == 0, ErrorKind::kConfig,
          "toy image size must be a positive multiple of 8");
  Require(classes >= 2, ErrorKind::kConfig, "toy model needs at least two classes");
  for (std::size_t c : channels) Require(c >= 1, ErrorKind::kConfig, "empty conv block");
  Require(std::isfinite(lambda) && lambda >= 0.0, ErrorKind::kConfig, "lambda must be >= 0");
  if (attention) {
    const AttentionConfig a = EffectiveAttention(*this);
    a.Validate();
    const std::size_t depth = a.placement == AttentionPlacement::kSelf ? 1 : channels[2];
    Require(depth % a.reduction == 0, ErrorKind::kConfig,
            "attention reduction " + std::to_string(a.reduction) + " does not divide depth " +
                std::to_string(depth));
  }
}

ToyParams ToyParams::Init(const ToyModelConfig& cfg, std::uint64_t seed) {
  cfg.Validate();
  RngStream rng(seed, 0x1a17);
  ToyParams p;
  std::size_t in = 1;
  for (std::size_t b = 0; b < 3; ++b) {
    const std::size_t out = cfg.channels[b];
    p.conv[b] = Tensor4(out, in, 3, 3);
    const double scale = std::sqrt(2.0 / double(9 * in));
    for (double& w : p.conv[b].data) w = scale * rng.Normal();
    p.conv_bias[b].assign(out, 0.0);
    in = out;
  }
  p.classifier.assign(cfg.classes * in, 0.0);
  p.classifier_bias.assign(cfg.classes, 0.0);
  if (cfg.attention) {
    const AttentionConfig a = EffectiveAttention(cfg);
    const std::size_t depth = a.placement == AttentionPlacement::kSelf ? 1 : in;
    p.attention = MultiHeadParams::Init(depth, a);
    const auto randomize = [&](auto& head) {
      if (head) RandomizeParams(*head, rng, 0.1);
    };
    randomize(p.attention->channel);
    randomize(p.attention->spatial);
    randomize(p.attention->coordinate);
  }
  return p;
}

bool operator==(const ToyParams& a, const ToyParams& b) {
  std::vector<double> va, vb;
  ToyParams ca = a, cb = b;
  ca.ForEachTensor([&](const std::string&, const TensorShape&, std::span<double> v) {
    va.insert(va.end(), v.begin(), v.end());
  });
  cb.ForEachTensor([&](const std::string&, const TensorShape&, std::span<double> v) {
    vb.insert(vb.end(), v.begin(), v.end());
  });
  if (va.size() != vb.size()) return false;
  // Bitwise: a zero-learning-rate step must not change a single bit.
  return std::memcmp(va.data(), vb.data(), va.size() * sizeof(double)) == 0;
}

std::vector<double> ToyPredict(const ToyModelConfig& cfg, const ToyParams& params,
                               const ImageArray& image) {
  Require(image.height() == cfg.image_size && image.width() == cfg.image_size,
          ErrorKind::kShape, "image does not match the model input size");
  return Forward(cfg, params, image).probs;
}

ToyLossGradient ToyBatchGradient(const ToyModelConfig& cfg, const ToyParams& params,
                                 std::span<const ImageArray* const> images,
                                 std::span<const int> labels, const FocalLossConfig& focal) {
  Require(images.size() == labels.size() && !images.empty(), ErrorKind::kShape,
          "batch images and labels must be non-empty and aligned");
  ToyLossGradient out{0.0, ZeroLike(params)};
  const double scale = 1.0 / double(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    Require(images[i]->height() == cfg.image_size && images[i]->width() == cfg.image_size,
            ErrorKind::kShape, "image does not match the model input size");
    const ForwardCache fc = Forward(cfg, params, *images[i]);
    const FocalLossValue fl = FocalLoss(fc.probs, std::size_t(labels[i]), focal);
    out.loss += scale * fl.loss;
    Backward(cfg, params, fc, fl.grad, scale, out.grads);
  }
  return out;
}

void TrainConfig::Validate() const {
  Require(epochs >= 1, ErrorKind::kConfig, "epochs must be >= 1");
  Require(batch_size >= 1, ErrorKind::kConfig, "batch size must be >= 1");
  Require(test_fraction > 0.0 && test_fraction < 1.0, ErrorKind::kConfig,
          "test fraction must lie in (0, 1)");
  Require(adam.learning_rate >= 0.0 && std::isfinite(adam.learning_rate), ErrorKind::kConfig,
          "learning rate must be finite and >= 0");
  Require(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0,
          ErrorKind::kConfig, "Adam betas must lie in [0, 1)");
  Require(adam.epsilon > 0.0, ErrorKind::kConfig, "Adam epsilon must be positive");
}

TrainResult TrainToy(const LabeledImages& data, const ToyModelConfig& model,
                     const TrainConfig& train) {
  model.Validate();
  train.Validate();
  Require(data.images.size() == data.labels.size(), ErrorKind::kShape,
          "dataset images and labels differ in length");
  for (int y : data.labels) {
    Require(y >= 0 && std::size_t(y) < model.classes, ErrorKind::kDomain,
            "dataset label out of range");
  }
  train.focal.Validate(model.classes);

  const HoldoutSplit split = StratifiedHoldout(data.labels, train.test_fraction, train.seed);
  Require(!split.train.empty() && !split.test.empty(), ErrorKind::kDomain,
          "dataset too small for a train/test split");

  std::vector<ImageArray> train_raw;
  for (std::size_t i : split.train) train_raw.push_back(data.images[i]);
  const Normalization norm = FitNormalization(train_raw);
  const auto normalized = [&](const IndexList& idx, std::vector<ImageArray>& images,
                              std::vector<int>& labels) {
    for (std::size_t i : idx) {
      const ImageArray& src = data.images[i];
      std::vector<double> px(src.pixels().begin(), src.pixels().end());
      for (double& v : px) v = (v - norm.mean) / norm.stddev;
      images.emplace_back(src.height(), src.width(), std::move(px));
      labels.push_back(data.labels[i]);
    }
  };
  std::vector<ImageArray> train_images, test_images;
  std::vector<int> train_labels, test_labels;
  normalized(split.train, train_images, train_labels);
  normalized(split.test, test_images, test_labels);

  TrainResult result;
  result.params = ToyParams::Init(model, train.seed);
  Adam adam(result.params, train.adam);
  const RngStream order_root(train.seed, 0x0bde);
  std::vector<std::size_t> order(train_images.size());

  for (std::size_t epoch = 1; epoch <= train.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    RngStream order_rng = order_root.Split(epoch);
    order_rng.Shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += train.batch_size) {
      if (train.max_steps && result.steps >= *train.max_steps) break;
      const std::size_t end = std::min(order.size(), start + train.batch_size);
      std::vector<const ImageArray*> batch;
      std::vector<int> batch_labels;
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(&train_images[order[i]]);
        batch_labels.push_back(train_labels[order[i]]);
      }
      ++result.steps;
      TakeStep(model, result.params, adam, batch, batch_labels, train.focal, result.steps);
    }
    const Evaluation tr = Evaluate(model, result.params, train_images, train_labels, train.focal);
    const Evaluation te = Evaluate(model, result.params, test_images, test_labels, train.focal);
    result.trace.push_back(MakeRow(epoch, "train", tr));
    result.trace.push_back(MakeRow(epoch, "test", te));
    if (epoch == train.epochs || (train.max_steps && result.steps >= *train.max_steps)) {
      result.test_report = te.report;
      result.test_predictions.clear();
      for (std::size_t i = 0; i < split.test.size(); ++i) {
        result.test_predictions.push_back({split.test[i], test_labels[i], te.predicted[i]});
      }
      break;
    }
  }
  return result;
}

std::vector<double> OverfitBatch(const ToyModelConfig& cfg, ToyParams& params,
                                 std::span<const ImageArray> images, std::span<const int> labels,
                                 const TrainConfig& train, std::size_t steps) {
  train.Validate();
  std::vector<const ImageArray*> batch;
  for (const ImageArray& im : images) batch.push_back(&im);
  Adam adam(params, train.adam);
  std::vector<double> losses;
  for (std::size_t s = 0; s <= steps; ++s) {
    if (s == steps) {
      losses.push_back(ToyBatchGradient(cfg, params, batch, labels, train.focal).loss);
    } else {
      losses.push_back(TakeStep(cfg, params, adam, batch, labels, train.focal, s + 1));
    }
  }
  return losses;
}

void WriteTraceCsv(std::ostream& out, std::span<const TraceRow> trace) {
  out << "epoch,split,loss,accuracy,macro_f1,specificity,sensitivity\n";
  std::ostringstream line;
  line.precision(17);
  for (const TraceRow& r : trace) {
    line.str("");
    line << r.epoch << ',' << r.split << ',' << r.loss << ',' << r.accuracy << ','
         << r.macro_f1 << ',' << r.specificity << ',' << r.sensitivity << '\n';
    out << line.str();
  }
}

void WriteParameters(ToyParams& params, std::ostream& blob, std::ostream& manifest) {
  std::size_t offset = 0;
  params.ForEachTensor([&](const std::string& name, const TensorShape& shape,
                           std::span<double> v) {
    manifest << name << ' ' << ShapeText(shape) << ' ' << offset << '\n';
    for (double x : v) {
      const auto bits = std::bit_cast<std::uint64_t>(x);
      char bytes[8];
      for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
      blob.write(bytes, 8);
    }
    offset += 8 * v.size();
  });
}

void ReadParameters(ToyParams& params, std::istream& blob, std::istream& manifest) {
  std::size_t offset = 0;
  params.ForEachTensor([&](const std::string& name, const TensorShape& shape,
                           std::span<double> v) {
    std::string got_name, got_shape;
    std::size_t got_offset = 0;
    Require(static_cast<bool>(manifest >> got_name >> got_shape >> got_offset) &&
                got_name == name && got_shape == ShapeText(shape) && got_offset == offset,
            ErrorKind::kSchema, "parameter manifest does not match the model at " + name);
    for (double& x : v) {
      unsigned char bytes[8];
      blob.read(reinterpret_cast<char*>(bytes), 8);
      Require(blob.gcount() == 8, ErrorKind::kSchema, "parameter blob is truncated");
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i) bits |= std::uint64_t(bytes[i]) << (8 * i);
      x = std::bit_cast<double>(bits);
    }
    offset += 8 * v.size();
  });
}

}  // namespace ofuse
