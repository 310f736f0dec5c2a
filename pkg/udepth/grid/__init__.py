# Copyright (C) 2026 The udepth authors. All rights reserved.
#
# This file is part of udepth.
#
# udepth is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 2 of the License, or
# (at your option) any later version.
#
# udepth is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with udepth.  If not, see <http://www.gnu.org/licenses/>.
'''
Depth / guide grid types, the multiscale pyramid, and grid file I/O.
'''
from udepth.grid.types import DepthGrid, SparseDepthGrid, LogVarGrid, GuideImage, ScalePyramid, ResidualGrid
from udepth.grid.ops import downsample_sparse_max, downsample_guide, upsample_bilinear
from udepth.grid.ops import bilinear_matrix, build_pyramid, count_valid
