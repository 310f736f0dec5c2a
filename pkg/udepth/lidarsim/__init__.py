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
Synthetic KITTI-like data: scenes, LiDAR scans, corrupted semi-dense
ground truth and dataset directories.
'''
from udepth.lidarsim.scene import Camera, Scene, GroundPlane, Wall, Box, Pole, FAR_DEPTH
from udepth.lidarsim.scene import render_gt, render_guide
from udepth.lidarsim.scan import ScanConfig, CorruptionConfig, simulate_scan, corrupt_gt, lattice_pixels
from udepth.lidarsim.scenes import ScenePreset, random_scene, DEFAULT_SIZE
from udepth.lidarsim.density import density_map, region_density
from udepth.lidarsim.dataset import Frame, Manifest, Dataset, DatasetGenerator
from udepth.lidarsim.dataset import gen_dataset, generate_frame, frame_name
