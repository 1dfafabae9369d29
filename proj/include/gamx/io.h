#ifndef GAMX_IO_H_
#define GAMX_IO_H_

#include <string>
#include <string_view>

#include "gamx/distribution.h"
#include "gamx/model.h"

namespace gamx {

// JSON documents. Rationals are "p/q" strings or integers; JSON floating
// point numbers are rejected so that no value is silently rounded.
//
//   model:        {task, beta0, components: [{beta, feature?, shape}], domains}
//   shape:        {kind: "spline", knots, polys: [[a3, a2, a1, a0], ...]}
//                 {kind: "mlp", layers: [{weights: [[...], ...], bias: [...]}]}
//                 {kind: "tree_ensemble", trees, weights, bias}
//   tree node:    {leaf: v} | {test: ">=" | "<", threshold: r, yes: node, no: node}
//   domain:       {kind: "enumerable", values} | {kind: "int_range", lo, hi}
//                 | {kind: "real_interval", lo, hi}
//   instance:     {values: [...]}
//   distribution: {features: [{kind: "uniform"} | {kind: "categorical", probs}
//                 | {kind: "density", breakpoints, pieces}]}
GamModel LoadModel(std::string_view text);
std::string SerializeModel(const GamModel& model);

Instance LoadInstance(std::string_view text);
std::string SerializeInstance(const Instance& x);

ProductDistribution LoadDistribution(std::string_view text);
std::string SerializeDistribution(const ProductDistribution& dist);

std::string ReadFile(const std::string& path);

}  // namespace gamx

#endif  // GAMX_IO_H_
