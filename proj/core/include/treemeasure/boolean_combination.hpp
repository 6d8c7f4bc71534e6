#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace treemeasure {

/// Boolean combination tree over leaves of type Atom.
template <class Atom>
class BoolCombination {
public:
    enum class Op { Leaf, Const, Not, And, Or };

    static BoolCombination leaf(Atom value) {
        BoolCombination c(Op::Leaf);
        c.leaf_ = std::make_shared<const Atom>(std::move(value));
        return c;
    }
    static BoolCombination constant(bool value) {
        BoolCombination c(Op::Const);
        c.value_ = value;
        return c;
    }
    static BoolCombination negate(BoolCombination arg) {
        BoolCombination c(Op::Not);
        c.args_.push_back(std::move(arg));
        return c;
    }
    static BoolCombination conjunction(std::vector<BoolCombination> args) {
        BoolCombination c(Op::And);
        c.args_ = std::move(args);
        return c;
    }
    static BoolCombination disjunction(std::vector<BoolCombination> args) {
        BoolCombination c(Op::Or);
        c.args_ = std::move(args);
        return c;
    }

    Op op() const noexcept { return op_; }
    const Atom& leaf_value() const { return *leaf_; }
    bool constant_value() const noexcept { return value_; }
    const std::vector<BoolCombination>& args() const noexcept { return args_; }

    /// Evaluates with a leaf predicate.
    bool evaluate(const std::function<bool(const Atom&)>& f) const {
        switch (op_) {
            case Op::Leaf:
                return f(*leaf_);
            case Op::Const:
                return value_;
            case Op::Not:
                return !args_[0].evaluate(f);
            case Op::And:
                for (const auto& a : args_)
                    if (!a.evaluate(f)) return false;
                return true;
            case Op::Or:
                for (const auto& a : args_)
                    if (a.evaluate(f)) return true;
                return false;
        }
        return false;
    }

    /// Structure-preserving leaf substitution.
    template <class Other>
    BoolCombination<Other> map(const std::function<BoolCombination<Other>(const Atom&)>& f) const {
        using R = BoolCombination<Other>;
        switch (op_) {
            case Op::Leaf:
                return f(*leaf_);
            case Op::Const:
                return R::constant(value_);
            case Op::Not:
                return R::negate(args_[0].template map<Other>(f));
            case Op::And:
            case Op::Or: {
                std::vector<R> out;
                for (const auto& a : args_) out.push_back(a.template map<Other>(f));
                return op_ == Op::And ? R::conjunction(std::move(out)) : R::disjunction(std::move(out));
            }
        }
        return R::constant(false);
    }

    void for_each_leaf(const std::function<void(const Atom&)>& f) const {
        if (op_ == Op::Leaf) f(*leaf_);
        for (const auto& a : args_) a.for_each_leaf(f);
    }

private:
    explicit BoolCombination(Op op) : op_(op) {}

    Op op_;
    bool value_ = false;
    std::shared_ptr<const Atom> leaf_;
    std::vector<BoolCombination> args_;
};

}  // namespace treemeasure
