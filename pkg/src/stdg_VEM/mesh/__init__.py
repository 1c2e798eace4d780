from stdg_VEM.mesh.PolyMesh import PolyMesh, cell_geometry
from stdg_VEM.mesh.CartesianGenerator import CartesianGenerator, generate_cartesian
from stdg_VEM.mesh.VoronoiGenerator import VoronoiGenerator, generate_voronoi
from stdg_VEM.mesh.MeshQuality import check_regularity
from stdg_VEM.mesh.MeshIO import load_mesh, save_mesh
