#include "cive/factor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>

namespace cive {

namespace {

// Strides for a row-major layout where the last scope variable varies
// fastest: stride[i] = product of cards[i+1..].
std::vector<std::size_t> strides_of(const std::vector<int>& cards) {
    std::vector<std::size_t> s(cards.size());
    std::size_t acc = 1;
    for (int i = static_cast<int>(cards.size()) - 1; i >= 0; --i) {
        s[i] = acc;
        acc *= static_cast<std::size_t>(cards[i]);
    }
    return s;
}

std::size_t cell_count(const std::vector<int>& cards) {
    std::size_t n = 1;
    for (int c : cards) n *= static_cast<std::size_t>(c);
    return n;
}

// Merged scope of two factors plus, per merged position, the stride of
// that variable in each operand (0 when absent).  Walking the merged
// scope with these strides aligns shared variables and broadcasts the
// rest.
struct Merged {
    std::vector<VarId> ids;
    std::vector<int> cards;
    std::vector<std::size_t> f_stride;
    std::vector<std::size_t> g_stride;
};

Merged merge_scopes(const Factor& f, const Factor& g) {
    Merged m;
    const auto& fs = f.scope();
    const auto& gs = g.scope();
    std::size_t i = 0, j = 0;
    while (i < fs.size() || j < gs.size()) {
        if (j == gs.size() || (i < fs.size() && fs[i] < gs[j])) {
            m.ids.push_back(fs[i]);
            m.cards.push_back(f.cardinalities()[i]);
            ++i;
        } else if (i == fs.size() || gs[j] < fs[i]) {
            m.ids.push_back(gs[j]);
            m.cards.push_back(g.cardinalities()[j]);
            ++j;
        } else {
            if (f.cardinalities()[i] != g.cardinalities()[j])
                throw UsageError("factor scopes disagree on cardinality of variable " +
                                 std::to_string(fs[i]));
            m.ids.push_back(fs[i]);
            m.cards.push_back(f.cardinalities()[i]);
            ++i;
            ++j;
        }
    }
    auto fstr = strides_of(f.cardinalities());
    auto gstr = strides_of(g.cardinalities());
    m.f_stride.assign(m.ids.size(), 0);
    m.g_stride.assign(m.ids.size(), 0);
    for (std::size_t k = 0; k < m.ids.size(); ++k) {
        int pf = f.position_of(m.ids[k]);
        int pg = g.position_of(m.ids[k]);
        if (pf >= 0) m.f_stride[k] = fstr[pf];
        if (pg >= 0) m.g_stride[k] = gstr[pg];
    }
    return m;
}

// Odometer over a scope that tracks up to three aligned offsets
// incrementally; O(1) amortized per step.
struct Cursor {
    const std::vector<int>& cards;
    const std::vector<std::size_t>& sa;
    const std::vector<std::size_t>& sb;
    const std::vector<std::size_t>* sc;
    std::vector<int> digits;
    std::size_t off_a = 0, off_b = 0, off_c = 0;

    Cursor(const std::vector<int>& cards_, const std::vector<std::size_t>& sa_,
           const std::vector<std::size_t>& sb_,
           const std::vector<std::size_t>* sc_ = nullptr)
        : cards(cards_), sa(sa_), sb(sb_), sc(sc_), digits(cards_.size(), 0) {}

    bool advance() {
        for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
            off_a += sa[i];
            off_b += sb[i];
            if (sc) off_c += (*sc)[i];
            if (++digits[i] < cards[i]) return true;
            digits[i] = 0;
            off_a -= sa[i] * static_cast<std::size_t>(cards[i]);
            off_b -= sb[i] * static_cast<std::size_t>(cards[i]);
            if (sc) off_c -= (*sc)[i] * static_cast<std::size_t>(cards[i]);
        }
        return false;
    }
};

}  // namespace

Factor::Factor(double value, Tag tag) : values_{value}, tag_(tag) {}

Factor::Factor(std::vector<VarId> scope, std::vector<int> cardinalities,
               std::vector<double> values, Tag tag)
    : scope_(std::move(scope)), cards_(std::move(cardinalities)),
      values_(std::move(values)), tag_(tag) {
    if (scope_.size() != cards_.size())
        throw UsageError("factor scope/cardinality length mismatch");
    for (std::size_t i = 0; i + 1 < scope_.size(); ++i)
        if (scope_[i] >= scope_[i + 1])
            throw UsageError("factor scope must be strictly ascending by variable id");
    for (int c : cards_)
        if (c < 1) throw UsageError("factor cardinalities must be >= 1");
    if (values_.size() != cell_count(cards_))
        throw UsageError("factor has " + std::to_string(values_.size()) +
                         " values, scope needs " + std::to_string(cell_count(cards_)));
}

bool Factor::has_variable(VarId v) const { return position_of(v) >= 0; }

int Factor::position_of(VarId v) const {
    auto it = std::lower_bound(scope_.begin(), scope_.end(), v);
    if (it == scope_.end() || *it != v) return -1;
    return static_cast<int>(it - scope_.begin());
}

int Factor::cardinality_of(VarId v) const {
    int p = position_of(v);
    if (p < 0) throw UsageError("variable " + std::to_string(v) + " not in factor scope");
    return cards_[p];
}

std::size_t Factor::linear_index(std::span<const int> assignment) const {
    assert(assignment.size() == scope_.size());
    std::size_t idx = 0;
    for (std::size_t i = 0; i < scope_.size(); ++i)
        idx = idx * static_cast<std::size_t>(cards_[i]) + static_cast<std::size_t>(assignment[i]);
    return idx;
}

double Factor::at(std::span<const int> assignment) const {
    return values_[linear_index(assignment)];
}

double Factor::sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
}

Factor Factor::relabeled(const std::function<VarId(VarId)>& rename) const {
    std::vector<std::pair<VarId, std::size_t>> renamed(scope_.size());
    for (std::size_t i = 0; i < scope_.size(); ++i) renamed[i] = {rename(scope_[i]), i};
    std::sort(renamed.begin(), renamed.end());
    for (std::size_t i = 0; i + 1 < renamed.size(); ++i)
        if (renamed[i].first == renamed[i + 1].first)
            throw UsageError("relabeling collapses two scope variables onto one id");

    std::vector<VarId> new_scope(scope_.size());
    std::vector<int> new_cards(scope_.size());
    for (std::size_t i = 0; i < renamed.size(); ++i) {
        new_scope[i] = renamed[i].first;
        new_cards[i] = cards_[renamed[i].second];
    }

    auto old_strides = strides_of(cards_);
    std::vector<double> new_values(values_.size());
    std::vector<int> digits(new_scope.size(), 0);
    for (std::size_t lin = 0; lin < new_values.size(); ++lin) {
        std::size_t old_idx = 0;
        for (std::size_t i = 0; i < digits.size(); ++i)
            old_idx += old_strides[renamed[i].second] * static_cast<std::size_t>(digits[i]);
        new_values[lin] = values_[old_idx];
        for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
            if (++digits[i] < new_cards[i]) break;
            digits[i] = 0;
        }
    }
    return Factor(std::move(new_scope), std::move(new_cards), std::move(new_values), tag_);
}

void Factor::dump(std::ostream& os, const std::function<std::string(VarId)>& name_of) const {
    os << (tag_ == Tag::heterogeneous ? "heterogeneous" : "homogeneous") << " factor over {";
    for (std::size_t i = 0; i < scope_.size(); ++i) {
        if (i) os << ", ";
        os << (name_of ? name_of(scope_[i]) : "v" + std::to_string(scope_[i])) << ":"
           << cards_[i];
    }
    os << "}\n";
    char buf[64];
    for (std::size_t i = 0; i < values_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", values_[i]);
        os << "  [" << i << "] " << buf << "\n";
    }
}

Factor multiply(const Factor& f, const Factor& g) {
    Merged m = merge_scopes(f, g);
    std::vector<double> out(cell_count(m.cards));
    Cursor cur(m.cards, m.f_stride, m.g_stride);
    std::size_t lin = 0;
    do {
        out[lin++] = f.values()[cur.off_a] * g.values()[cur.off_b];
    } while (cur.advance());
    Factor::Tag tag = (f.tag() == Factor::Tag::homogeneous &&
                       g.tag() == Factor::Tag::homogeneous)
                          ? Factor::Tag::homogeneous
                          : Factor::Tag::heterogeneous;
    return Factor(std::move(m.ids), std::move(m.cards), std::move(out), tag);
}

Factor combine_general(const Factor& f, const Factor& g, const ConvergentContext& ctx) {
    Merged m = merge_scopes(f, g);

    // Convergent variables shared by both operands get convolved; the
    // rest of the merged scope aligns pointwise.
    std::vector<std::size_t> conv_pos;
    for (std::size_t k = 0; k < m.ids.size(); ++k)
        if (m.f_stride[k] != 0 && m.g_stride[k] != 0 && ctx.contains(m.ids[k]))
            conv_pos.push_back(k);

    const std::size_t n = cell_count(m.cards);
    std::vector<double> out(n, 0.0);
    auto out_strides = strides_of(m.cards);

    if (conv_pos.empty()) {
        // Degenerates to pointwise multiplication.
        Cursor cur(m.cards, m.f_stride, m.g_stride);
        std::size_t lin = 0;
        do {
            out[lin++] = f.values()[cur.off_a] * g.values()[cur.off_b];
        } while (cur.advance());
        return Factor(std::move(m.ids), std::move(m.cards), std::move(out),
                      Factor::Tag::heterogeneous);
    }

    // Offset tables over the joint value space of the shared convergent
    // variables: for operand assignments (i, j), the result cell shifts
    // by r_off[i][j], where each variable's output value is its base op
    // applied to the two operand values.
    std::vector<int> conv_cards;
    std::vector<const BaseCombinationOp*> conv_ops;
    for (std::size_t k : conv_pos) {
        conv_cards.push_back(m.cards[k]);
        conv_ops.push_back(ctx.find(m.ids[k]));
    }
    std::size_t ne = 1;
    for (int c : conv_cards) ne *= static_cast<std::size_t>(c);

    std::vector<std::size_t> f_off(ne, 0), g_off(ne, 0);
    std::vector<std::vector<int>> conv_digits(ne, std::vector<int>(conv_pos.size(), 0));
    {
        std::vector<int> digits(conv_pos.size(), 0);
        for (std::size_t a = 0; a < ne; ++a) {
            conv_digits[a] = digits;
            for (std::size_t t = 0; t < conv_pos.size(); ++t) {
                f_off[a] += m.f_stride[conv_pos[t]] * static_cast<std::size_t>(digits[t]);
                g_off[a] += m.g_stride[conv_pos[t]] * static_cast<std::size_t>(digits[t]);
            }
            for (int t = static_cast<int>(digits.size()) - 1; t >= 0; --t) {
                if (++digits[t] < conv_cards[t]) break;
                digits[t] = 0;
            }
        }
    }
    std::vector<std::size_t> r_off(ne * ne, 0);
    for (std::size_t a = 0; a < ne; ++a) {
        for (std::size_t b = 0; b < ne; ++b) {
            std::size_t off = 0;
            for (std::size_t t = 0; t < conv_pos.size(); ++t) {
                int merged = conv_ops[t]->apply(conv_digits[a][t], conv_digits[b][t],
                                                conv_cards[t]);
                off += out_strides[conv_pos[t]] * static_cast<std::size_t>(merged);
            }
            r_off[a * ne + b] = off;
        }
    }

    // Iterate the non-convolved part of the merged scope; convolved
    // positions are pinned at zero and addressed via the offset tables.
    std::vector<int> outer_cards = m.cards;
    for (std::size_t k : conv_pos) outer_cards[k] = 1;

    Cursor cur(outer_cards, m.f_stride, m.g_stride, &out_strides);
    do {
        const std::size_t bf = cur.off_a, bg = cur.off_b, br = cur.off_c;
        for (std::size_t a = 0; a < ne; ++a) {
            const double fv = f.values()[bf + f_off[a]];
            if (fv == 0.0) continue;
            const std::size_t* row = &r_off[a * ne];
            for (std::size_t b = 0; b < ne; ++b)
                out[br + row[b]] += fv * g.values()[bg + g_off[b]];
        }
    } while (cur.advance());

    return Factor(std::move(m.ids), std::move(m.cards), std::move(out),
                  Factor::Tag::heterogeneous);
}

Factor sum_out(const Factor& f, VarId v) {
    int pos = f.position_of(v);
    if (pos < 0)
        throw UsageError("sum_out: variable " + std::to_string(v) + " not in scope");

    std::vector<VarId> out_scope = f.scope();
    std::vector<int> out_cards = f.cardinalities();
    out_scope.erase(out_scope.begin() + pos);
    out_cards.erase(out_cards.begin() + pos);

    std::vector<double> out(cell_count(out_cards), 0.0);
    auto out_strides = strides_of(out_cards);

    // Walk f once; the result stride at v's position is zero, so all of
    // v's values accumulate into the same output cell.
    std::vector<std::size_t> r_stride(f.scope().size(), 0);
    for (std::size_t i = 0, j = 0; i < f.scope().size(); ++i) {
        if (static_cast<int>(i) == pos) continue;
        r_stride[i] = out_strides[j++];
    }
    std::vector<std::size_t> zero(f.scope().size(), 0);
    Cursor cur(f.cardinalities(), r_stride, zero);
    std::size_t lin = 0;
    do {
        out[cur.off_a] += f.values()[lin++];
    } while (cur.advance());

    return Factor(std::move(out_scope), std::move(out_cards), std::move(out), f.tag());
}

Factor restrict_factor(const Factor& f, VarId v, int value, bool drop) {
    int pos = f.position_of(v);
    if (pos < 0)
        throw UsageError("restrict: variable " + std::to_string(v) + " not in scope");
    if (value < 0 || value >= f.cardinalities()[pos])
        throw UsageError("restrict: value " + std::to_string(value) +
                         " out of range for variable " + std::to_string(v));

    auto f_strides = strides_of(f.cardinalities());

    if (drop) {
        std::vector<VarId> out_scope = f.scope();
        std::vector<int> out_cards = f.cardinalities();
        out_scope.erase(out_scope.begin() + pos);
        out_cards.erase(out_cards.begin() + pos);

        std::vector<double> out(cell_count(out_cards));
        std::vector<std::size_t> fstr_for_out(out_cards.size());
        for (std::size_t i = 0, j = 0; i < f.scope().size(); ++i) {
            if (static_cast<int>(i) == pos) continue;
            fstr_for_out[j++] = f_strides[i];
        }
        std::vector<std::size_t> zero(out_cards.size(), 0);
        Cursor cur(out_cards, fstr_for_out, zero);
        const std::size_t base = f_strides[pos] * static_cast<std::size_t>(value);
        std::size_t lin = 0;
        do {
            out[lin++] = f.values()[base + cur.off_a];
        } while (cur.advance());
        return Factor(std::move(out_scope), std::move(out_cards), std::move(out), f.tag());
    }

    // Keep the dimension; zero every cell off the v=value slice.
    std::vector<double> out(f.size(), 0.0);
    std::vector<int> slice_cards = f.cardinalities();
    slice_cards[pos] = 1;
    std::vector<std::size_t> zero(slice_cards.size(), 0);
    Cursor cur(slice_cards, f_strides, zero);
    const std::size_t base = f_strides[pos] * static_cast<std::size_t>(value);
    do {
        out[base + cur.off_a] = f.values()[base + cur.off_a];
    } while (cur.advance());
    return Factor(f.scope(), f.cardinalities(), std::move(out), f.tag());
}

}  // namespace cive
