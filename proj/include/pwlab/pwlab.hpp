#ifndef PWLAB_PWLAB_HPP
#define PWLAB_PWLAB_HPP

#include <pwlab/core.hpp>
#include <pwlab/random.hpp>
#include <pwlab/fit.hpp>
#include <pwlab/geometry.hpp>
#include <pwlab/omega.hpp>
#include <pwlab/grid.hpp>
#include <pwlab/fourier.hpp>
#include <pwlab/hankel.hpp>
#include <pwlab/nehari.hpp>
#include <pwlab/hardy.hpp>
#include <pwlab/simplicial.hpp>
#include <pwlab/io.hpp>
#include <pwlab/report.hpp>
#include <pwlab/verify.hpp>

#endif // PWLAB_PWLAB_HPP
