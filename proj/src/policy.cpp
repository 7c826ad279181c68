// SPDX-License-Identifier: Apache-2.0

#include "lemjudge/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lemjudge::policy {

namespace {

std::size_t idx(int row, int col, int cols) {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
           static_cast<std::size_t>(col);
}

bool finite_all(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// log softmax(z)[y] with the usual max-shift for stability.
double log_softmax_at(const std::vector<double>& logits, int y) {
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (const double z : logits) {
        sum += std::exp(z - zmax);
    }
    return (logits[static_cast<std::size_t>(y)] - zmax) - std::log(sum);
}

std::vector<double> softmax(const std::vector<double>& logits) {
    const double zmax = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - zmax);
        sum += p[i];
    }
    for (double& v : p) {
        v /= sum;
    }
    return p;
}

// E-vector: input_projection * x.
std::vector<double> project_features(const PolicyParameters& params,
                                     std::span<const double> x) {
    const int E = params.dims.hidden;
    const int F = params.dims.features;
    std::vector<double> proj(static_cast<std::size_t>(E), 0.0);
    for (int e = 0; e < E; ++e) {
        double acc = 0.0;
        const double* row = params.input_projection.data() + idx(e, 0, F);
        for (int f = 0; f < F; ++f) {
            acc += row[f] * x[static_cast<std::size_t>(f)];
        }
        proj[static_cast<std::size_t>(e)] = acc;
    }
    return proj;
}

std::vector<double> logits_from_hidden(const PolicyParameters& params,
                                       const std::vector<double>& h) {
    const int V = params.dims.vocab;
    const int E = params.dims.hidden;
    std::vector<double> z(static_cast<std::size_t>(V), 0.0);
    for (int v = 0; v < V; ++v) {
        double acc = 0.0;
        const double* row = params.output_weights.data() + idx(v, 0, E);
        for (int e = 0; e < E; ++e) {
            acc += row[e] * h[static_cast<std::size_t>(e)];
        }
        z[static_cast<std::size_t>(v)] = acc;
    }
    return z;
}

std::vector<double> hidden_at(const PolicyParameters& params, const std::vector<double>& proj,
                              const PrefixState& state, int position) {
    const int E = params.dims.hidden;
    std::vector<double> h(static_cast<std::size_t>(E));
    const double* bias = params.position_bias.data() + idx(position, 0, E);
    for (int e = 0; e < E; ++e) {
        h[static_cast<std::size_t>(e)] =
            proj[static_cast<std::size_t>(e)] + state.summary[static_cast<std::size_t>(e)] + bias[e];
    }
    return h;
}

void check_dims(const PolicyParameters& params) {
    const auto& d = params.dims;
    if (d.vocab <= 0 || d.hidden <= 0 || d.features <= 0 || d.max_len <= 0) {
        throw std::invalid_argument("policy: non-positive dimension");
    }
    const auto expect = [](const std::vector<double>& v, std::size_t n, const char* name) {
        if (v.size() != n) {
            throw std::invalid_argument(std::string("policy: bad shape for ") + name);
        }
    };
    expect(params.token_embedding, static_cast<std::size_t>(d.vocab) * d.hidden, "token_embedding");
    expect(params.input_projection, static_cast<std::size_t>(d.hidden) * d.features,
           "input_projection");
    expect(params.position_bias, static_cast<std::size_t>(d.max_len) * d.hidden, "position_bias");
    expect(params.output_weights, static_cast<std::size_t>(d.vocab) * d.hidden, "output_weights");
}

}  // namespace

bool PolicyParameters::all_finite() const {
    return finite_all(token_embedding) && finite_all(input_projection) &&
           finite_all(position_bias) && finite_all(output_weights);
}

std::size_t PolicyParameters::parameter_count() const {
    return token_embedding.size() + input_projection.size() + position_bias.size() +
           output_weights.size();
}

PolicyParameters init_policy(const PolicyDims& dims, std::uint64_t seed) {
    PolicyParameters p;
    p.dims = dims;
    p.token_embedding.resize(static_cast<std::size_t>(dims.vocab) * dims.hidden);
    p.input_projection.resize(static_cast<std::size_t>(dims.hidden) * dims.features);
    p.position_bias.resize(static_cast<std::size_t>(dims.max_len) * dims.hidden);
    p.output_weights.resize(static_cast<std::size_t>(dims.vocab) * dims.hidden);
    check_dims(p);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-0.1, 0.1);
    for (auto* arr : {&p.token_embedding, &p.input_projection, &p.position_bias, &p.output_weights}) {
        for (double& v : *arr) {
            v = unif(rng);
        }
    }
    return p;
}

ParameterGradient zeros_like(const PolicyParameters& like) {
    ParameterGradient g;
    g.dims = like.dims;
    g.token_embedding.assign(like.token_embedding.size(), 0.0);
    g.input_projection.assign(like.input_projection.size(), 0.0);
    g.position_bias.assign(like.position_bias.size(), 0.0);
    g.output_weights.assign(like.output_weights.size(), 0.0);
    return g;
}

void axpy(ParameterGradient& grad, const ParameterGradient& delta, double scale) {
    if (!(grad.dims == delta.dims)) {
        throw std::invalid_argument("policy: axpy shape mismatch");
    }
    const auto add = [scale](std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] += scale * b[i];
        }
    };
    add(grad.token_embedding, delta.token_embedding);
    add(grad.input_projection, delta.input_projection);
    add(grad.position_bias, delta.position_bias);
    add(grad.output_weights, delta.output_weights);
}

void push_token(const PolicyParameters& params, PrefixState& state, int token) {
    const int E = params.dims.hidden;
    const double* emb = params.token_embedding.data() + idx(token, 0, E);
    const double n = static_cast<double>(state.length);
    for (int e = 0; e < E; ++e) {
        auto& s = state.summary[static_cast<std::size_t>(e)];
        s = (s * n + emb[e]) / (n + 1.0);
    }
    state.length += 1;
}

std::vector<double> next_token_logits(const PolicyParameters& params,
                                      std::span<const double> input_features,
                                      const PrefixState& state, int position) {
    check_dims(params);
    if (position < 0 || position >= params.dims.max_len) {
        throw std::invalid_argument("policy: position out of range");
    }
    if (static_cast<int>(input_features.size()) != params.dims.features) {
        throw std::invalid_argument("policy: feature size mismatch");
    }
    const auto proj = project_features(params, input_features);
    return logits_from_hidden(params, hidden_at(params, proj, state, position));
}

SampledSequence sample_sequence(const PolicyParameters& params,
                                std::span<const double> input_features, double temperature,
                                int max_len, std::mt19937_64& rng) {
    check_dims(params);
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("policy: temperature must be > 0");
    }
    max_len = std::min(max_len, params.dims.max_len);
    const int terminal = params.dims.vocab - 1;
    const auto proj = project_features(params, input_features);

    SampledSequence seq;
    PrefixState state(params.dims.hidden);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int pos = 0; pos < max_len; ++pos) {
        auto logits = logits_from_hidden(params, hidden_at(params, proj, state, pos));
        for (double& z : logits) {
            z /= temperature;
        }
        const auto probs = softmax(logits);

        const double u = unif(rng);
        double cum = 0.0;
        int tok = params.dims.vocab - 1;
        for (int v = 0; v < params.dims.vocab; ++v) {
            cum += probs[static_cast<std::size_t>(v)];
            if (u < cum) {
                tok = v;
                break;
            }
        }
        seq.tokens.push_back(tok);
        seq.logprobs.push_back(log_softmax_at(logits, tok));
        if (tok == terminal) {
            break;
        }
        push_token(params, state, tok);
    }
    return seq;
}

double weighted_sequence_logprob(const PolicyParameters& params,
                                 std::span<const double> input_features,
                                 std::span<const int> tokens, std::span<const double> weights) {
    check_dims(params);
    if (tokens.size() != weights.size()) {
        throw std::invalid_argument("policy: tokens/weights length mismatch");
    }
    const auto proj = project_features(params, input_features);
    PrefixState state(params.dims.hidden);
    double total = 0.0;
    for (std::size_t j = 0; j < tokens.size(); ++j) {
        const auto logits =
            logits_from_hidden(params, hidden_at(params, proj, state, static_cast<int>(j)));
        total += weights[j] * log_softmax_at(logits, tokens[j]);
        push_token(params, state, tokens[j]);
    }
    return total;
}

ParameterGradient accumulate_logprob_gradient(const PolicyParameters& params,
                                              std::span<const double> input_features,
                                              std::span<const int> tokens,
                                              std::span<const double> weights) {
    check_dims(params);
    if (tokens.size() != weights.size()) {
        throw std::invalid_argument("policy: tokens/weights length mismatch");
    }
    const int V = params.dims.vocab;
    const int E = params.dims.hidden;
    const int F = params.dims.features;
    const std::size_t n = tokens.size();
    if (static_cast<int>(n) > params.dims.max_len) {
        throw std::invalid_argument("policy: sequence longer than max_len");
    }

    ParameterGradient grad = zeros_like(params);
    const auto proj = project_features(params, input_features);
    PrefixState state(params.dims.hidden);

    // dL/dh_j for every step; needed afterwards for the prefix-mean chain.
    std::vector<std::vector<double>> dh(n, std::vector<double>(static_cast<std::size_t>(E), 0.0));

    for (std::size_t j = 0; j < n; ++j) {
        const int y = tokens[j];
        if (y < 0 || y >= V) {
            throw std::invalid_argument("policy: token id out of range");
        }
        const double w = weights[j];
        if (w != 0.0) {
            const auto h = hidden_at(params, proj, state, static_cast<int>(j));
            const auto probs = softmax(logits_from_hidden(params, h));

            // dlogpi/dz = onehot(y) - pi, scaled by the token weight.
            for (int v = 0; v < V; ++v) {
                const double gz =
                    w * ((v == y ? 1.0 : 0.0) - probs[static_cast<std::size_t>(v)]);
                // output_weights row v accumulates gz * h.
                double* out_row = grad.output_weights.data() + idx(v, 0, E);
                const double* wrow = params.output_weights.data() + idx(v, 0, E);
                for (int e = 0; e < E; ++e) {
                    out_row[e] += gz * h[static_cast<std::size_t>(e)];
                    dh[j][static_cast<std::size_t>(e)] += gz * wrow[e];
                }
            }
            // h_j = proj + prefix + bias: proj chains into input_projection,
            // bias is direct.
            double* bias_row = grad.position_bias.data() + idx(static_cast<int>(j), 0, E);
            for (int e = 0; e < E; ++e) {
                const double d = dh[j][static_cast<std::size_t>(e)];
                bias_row[e] += d;
                double* in_row = grad.input_projection.data() + idx(e, 0, F);
                for (int f = 0; f < F; ++f) {
                    in_row[f] += d * input_features[static_cast<std::size_t>(f)];
                }
            }
        }
        push_token(params, state, tokens[j]);
    }

    // Prefix mean: h_j sees emb[y_k]/j for every k < j, so emb[y_k] collects
    // the suffix sum of dh_j / j over j > k.
    std::vector<double> cumul(static_cast<std::size_t>(E), 0.0);
    for (std::size_t j = n; j-- > 1;) {
        const double inv = 1.0 / static_cast<double>(j);
        for (int e = 0; e < E; ++e) {
            cumul[static_cast<std::size_t>(e)] += dh[j][static_cast<std::size_t>(e)] * inv;
        }
        double* emb_row = grad.token_embedding.data() + idx(tokens[j - 1], 0, E);
        for (int e = 0; e < E; ++e) {
            emb_row[e] += cumul[static_cast<std::size_t>(e)];
        }
    }
    return grad;
}

namespace {

void write_array(std::ostream& os, const char* name, const std::vector<double>& arr) {
    os << name;
    char buf[40];
    for (const double v : arr) {
        std::snprintf(buf, sizeof(buf), " %a", v);
        os << buf;
    }
    os << '\n';
}

std::vector<double> read_array(std::istringstream& line, std::size_t n, const char* name) {
    std::vector<double> arr;
    arr.reserve(n);
    std::string tok;
    while (line >> tok) {
        arr.push_back(std::strtod(tok.c_str(), nullptr));
    }
    if (arr.size() != n) {
        throw std::runtime_error(std::string("checkpoint: wrong element count for ") + name);
    }
    return arr;
}

}  // namespace

void save_checkpoint(const PolicyParameters& params,
                     const std::map<std::string, std::string>& metadata, const std::string& path) {
    check_dims(params);
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("checkpoint: cannot open for writing: " + path);
    }
    os << "lemjudge-checkpoint 1\n";
    os << "dims " << params.dims.vocab << ' ' << params.dims.hidden << ' ' << params.dims.features
       << ' ' << params.dims.max_len << '\n';
    os << "meta-count " << metadata.size() << '\n';
    for (const auto& [key, value] : metadata) {
        os << "meta " << key << ' ' << value << '\n';
    }
    write_array(os, "token_embedding", params.token_embedding);
    write_array(os, "input_projection", params.input_projection);
    write_array(os, "position_bias", params.position_bias);
    write_array(os, "output_weights", params.output_weights);
    if (!os) {
        throw std::runtime_error("checkpoint: write failed: " + path);
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("checkpoint: cannot open: " + path);
    }
    std::string line;
    if (!std::getline(is, line) || line != "lemjudge-checkpoint 1") {
        throw std::runtime_error("checkpoint: bad magic/version in " + path);
    }

    Checkpoint ckpt;
    auto& p = ckpt.params;
    if (!std::getline(is, line)) {
        throw std::runtime_error("checkpoint: truncated header");
    }
    {
        std::istringstream hdr(line);
        std::string tag;
        hdr >> tag >> p.dims.vocab >> p.dims.hidden >> p.dims.features >> p.dims.max_len;
        if (tag != "dims" || !hdr) {
            throw std::runtime_error("checkpoint: bad dims line");
        }
    }
    if (!std::getline(is, line)) {
        throw std::runtime_error("checkpoint: truncated header");
    }
    std::size_t meta_count = 0;
    {
        std::istringstream hdr(line);
        std::string tag;
        hdr >> tag >> meta_count;
        if (tag != "meta-count" || !hdr) {
            throw std::runtime_error("checkpoint: bad meta-count line");
        }
    }
    for (std::size_t i = 0; i < meta_count; ++i) {
        if (!std::getline(is, line)) {
            throw std::runtime_error("checkpoint: truncated metadata");
        }
        std::istringstream meta(line);
        std::string tag, key;
        meta >> tag >> key;
        if (tag != "meta" || !meta) {
            throw std::runtime_error("checkpoint: bad metadata line");
        }
        std::string value;
        std::getline(meta, value);
        if (!value.empty() && value.front() == ' ') {
            value.erase(value.begin());
        }
        ckpt.metadata[key] = value;
    }

    const auto read_named = [&](const char* name, std::size_t n) {
        if (!std::getline(is, line)) {
            throw std::runtime_error(std::string("checkpoint: missing array ") + name);
        }
        std::istringstream arr(line);
        std::string tag;
        arr >> tag;
        if (tag != name) {
            throw std::runtime_error(std::string("checkpoint: expected array ") + name);
        }
        return read_array(arr, n, name);
    };
    const auto& d = p.dims;
    p.token_embedding = read_named("token_embedding", static_cast<std::size_t>(d.vocab) * d.hidden);
    p.input_projection =
        read_named("input_projection", static_cast<std::size_t>(d.hidden) * d.features);
    p.position_bias = read_named("position_bias", static_cast<std::size_t>(d.max_len) * d.hidden);
    p.output_weights = read_named("output_weights", static_cast<std::size_t>(d.vocab) * d.hidden);
    check_dims(p);
    if (!p.all_finite()) {
        throw std::runtime_error("checkpoint: non-finite parameter in " + path);
    }
    return ckpt;
}

}  // namespace lemjudge::policy
