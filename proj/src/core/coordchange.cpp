#include "core/coordchange.hpp"

#include <set>

#include "core/errors.hpp"

namespace superkilling {

namespace {

void check_images(const ChartPtr& source, const ChartPtr& target,
                  const std::vector<SuperFunction>& images) {
  if (images.size() != target->dim())
    throw InvalidArgumentError("coordinate change: one image per target "
                               "coordinate required");
  for (std::size_t a = 0; a < images.size(); ++a) {
    if (images[a].chart() != source)
      throw ChartMismatchError("coordinate image not on the source chart");
    if (!images[a].is_homogeneous(target->parity(a)))
      throw ParityError("image of coordinate '" + target->coord_name(a) +
                        "' does not preserve parity");
  }
}

}  // namespace

CoordinateChange::CoordinateChange(
    ChartPtr source, ChartPtr target, std::vector<SuperFunction> images,
    std::optional<std::vector<SuperFunction>> inverse_images)
    : source_(std::move(source)),
      target_(std::move(target)),
      images_(std::move(images)),
      inverse_images_(std::move(inverse_images)) {
  check_images(source_, target_, images_);
  if (inverse_images_) {
    check_images(target_, source_, *inverse_images_);
    // Both composites must be the identity.
    CoordinateChange inv(target_, source_, *inverse_images_);
    for (std::size_t a = 0; a < target_->dim(); ++a) {
      SuperFunction back = pullback(inv, images_[a]);
      if (!(back - SuperFunction::coordinate(target_, a)).is_zero())
        throw InvalidArgumentError(
            "declared inverse is not a right inverse on coordinate '" +
            target_->coord_name(a) + "'");
    }
    for (std::size_t a = 0; a < source_->dim(); ++a) {
      SuperFunction back = pullback(*this, (*inverse_images_)[a]);
      if (!(back - SuperFunction::coordinate(source_, a)).is_zero())
        throw InvalidArgumentError(
            "declared inverse is not a left inverse on coordinate '" +
            source_->coord_name(a) + "'");
    }
  }
  // The change must be invertible where it is used: Berezinian body of
  // the Jacobian must not vanish identically.
  SuperFunction ber = berezinian(jacobian(*this));
  if (ber.body().is_zero())
    throw SingularMatrixError(
        "coordinate change has a singular Jacobian Berezinian body");
}

CoordinateChange CoordinateChange::inverse() const {
  if (!inverse_images_)
    throw InvalidArgumentError(
        "inverse coordinate change required but not declared");
  return CoordinateChange(target_, source_, *inverse_images_, images_);
}

SuperMatrix jacobian(const CoordinateChange& c) {
  std::vector<Parity> rp, cp;
  for (std::size_t a = 0; a < c.target()->dim(); ++a)
    rp.push_back(c.target()->parity(a));
  for (std::size_t a = 0; a < c.source()->dim(); ++a)
    cp.push_back(c.source()->parity(a));
  SuperMatrix j(rp, cp, SuperFunction::zero(c.source()));
  for (std::size_t r = 0; r < rp.size(); ++r)
    for (std::size_t col = 0; col < cp.size(); ++col)
      j.at(r, col) = c.images()[r].partial(col);
  return j;
}

namespace {

struct SubstContext {
  const CoordinateChange& change;
  std::map<GenId, SuperFunction> gen_cache;
};

SuperFunction eval_scalar_on_source(SubstContext& ctx, const ScalarExpr& s);

SuperFunction eval_gen_on_source(SubstContext& ctx, GenId g) {
  auto it = ctx.gen_cache.find(g);
  if (it != ctx.gen_cache.end()) return it->second;
  const GeneratorInfo& info = generator_info(g);
  SuperFunction value = SuperFunction::zero(ctx.change.source());
  if (info.kind == GenKind::Symbol) {
    bool found = false;
    const ChartPtr& target = ctx.change.target();
    for (std::size_t i = 0; i < target->even_dim(); ++i) {
      if (target->even_symbol(i) == g) {
        value = ctx.change.images()[i];
        found = true;
        break;
      }
    }
    if (!found)
      throw InvalidArgumentError("pullback: symbol '" + info.name +
                                 "' is not a coordinate of chart " +
                                 target->name());
  } else {
    SuperFunction arg = eval_scalar_on_source(ctx, *info.arg);
    value = apply_function(info.kind, arg);
  }
  ctx.gen_cache.emplace(g, value);
  return value;
}

SuperFunction eval_poly_on_source(SubstContext& ctx, const Poly& p) {
  SuperFunction acc = SuperFunction::zero(ctx.change.source());
  for (const auto& [m, c] : p.terms()) {
    SuperFunction t = SuperFunction::constant(ctx.change.source(), c);
    for (const auto& [id, e] : m.exps()) {
      SuperFunction g = eval_gen_on_source(ctx, id);
      for (std::uint32_t k = 0; k < e; ++k) t = t * g;
    }
    acc = acc + t;
  }
  return acc;
}

SuperFunction eval_scalar_on_source(SubstContext& ctx, const ScalarExpr& s) {
  SuperFunction n = eval_poly_on_source(ctx, s.num());
  if (s.den().is_one()) return n;
  SuperFunction d = eval_poly_on_source(ctx, s.den());
  return n * d.invert();
}

}  // namespace

SuperFunction pullback(const CoordinateChange& c, const SuperFunction& f) {
  if (f.chart() != c.target())
    throw ChartMismatchError("pullback: function does not live on the "
                             "target chart");
  SubstContext ctx{c, {}};
  SuperFunction acc = SuperFunction::zero(c.source());
  std::size_t n = c.target()->even_dim();
  for (const auto& [mask, coeff] : f.terms()) {
    SuperFunction t = eval_scalar_on_source(ctx, coeff);
    OddMask mm = mask;
    while (mm) {
      int k = __builtin_ctzll(mm);
      mm &= mm - 1;
      t = t * c.images()[n + k];
    }
    acc = acc + t;
  }
  return acc;
}

SuperFunction pullback_scalar(const CoordinateChange& c, const ScalarExpr& s) {
  SubstContext ctx{c, {}};
  return eval_scalar_on_source(ctx, s);
}

}  // namespace superkilling
