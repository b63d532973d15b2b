#pragma once

#include "backend.hpp"
#include "chase_lev_deque.hpp"
#include "delaunay.hpp"
#include "element_pool.hpp"
#include "geometry.hpp"
#include "mesh.hpp"
#include "quality.hpp"
#include "scheduler.hpp"
#include "smoothing.hpp"
#include "spec_lock.hpp"
#include "task_for.hpp"
