#pragma once

#include <cstdint>
#include <random>

#include "cubekit/action.hpp"
#include "cubekit/median_graph.hpp"
#include "cubekit/sageev.hpp"

// Standard graphs, wallspaces and actions used by the tests, the CLI
// `generate` subcommand and the Python bindings.
namespace cubekit::fixtures {

using Rng = std::mt19937_64;

// Vertex i is labelled by its bits, most significant first.
MedianGraph hypercube(unsigned dim);
MedianGraph path(std::size_t n);
MedianGraph cycle(std::size_t n);
MedianGraph complete(std::size_t n);
// Vertex 0 is the centre.
MedianGraph star(std::size_t leaves);
// Vertex (a, b) has id a * |h| + b.
MedianGraph product(const MedianGraph& g, const MedianGraph& h);
MedianGraph grid(std::size_t width, std::size_t height);
// The graph with vertex v deleted; ids above v shift down by one.
MedianGraph remove_vertex(const MedianGraph& g, VertexId v);

MedianGraph random_tree(std::size_t n, Rng& rng);
// Connected graph: a random tree plus `extra` random chords.
MedianGraph random_graph(std::size_t n, std::size_t extra, Rng& rng);
// Dual of a random wallspace with at most max_walls walls, rejected until
// it has at most max_vertices vertices.
MedianGraph random_median(Rng& rng, std::size_t max_vertices, std::size_t max_walls = 6);

// Three walls on four points whose parts pairwise intersect.
Wallspace crossing_walls();
// The walls {x}|rest, {y}|rest, {z}|rest on {c, x, y, z}.
Wallspace facing_walls();

std::shared_ptr<const HyperplaneSystem> hyperplanes_of(MedianGraph g);

// F2 = <a, b> acting on the left on the ball of radius R in its Cayley
// tree. Vertices are numbered in length-lex order of their reduced words;
// labels are the words ("1" for the identity) when R <= 10.
PartialAction free_group_ball(unsigned radius);
// The reduced word of each vertex of free_group_ball(radius).
std::vector<Word> free_group_words(const PartialAction& a);

// Z = <t> shifting the path -R..R; base 0.
PartialAction integer_path(unsigned radius);
// Z^2 = <x, y> shifting the width x height grid; base at the centre.
PartialAction integer_grid(std::size_t width, std::size_t height);
// Every generator acts as the identity.
PartialAction trivial_action(MedianGraph g, const GeneratorPairs& gens);
// F2 x Z acting on free_group_ball(radius) x path(2 * path_radius + 1).
PartialAction free_group_times_integer(unsigned radius, unsigned path_radius);

// The permutation representation a, b -> (0 1).
FiniteQuotient sign_quotient(const Generators& gens);

}  // namespace cubekit::fixtures
