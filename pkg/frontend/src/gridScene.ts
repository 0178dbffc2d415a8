import {
  BoxGeometry,
  Color,
  EdgesGeometry,
  Group,
  LineBasicMaterial,
  LineSegments,
  Mesh,
  MeshLambertMaterial,
  Vector3,
} from "three";

import { clusterColor } from "./palette";
import type { GridCell, GridState } from "./types";

export const ALIVE_OPACITY = 0.15;
export const ISOLATED_COLOR = "#333333";

export interface SceneStats {
  active: number;
  alive: number;
  isolated: number;
  colors: Set<string>;
}

export interface GridScene {
  group: Group;
  pickables: Mesh[];
  center: Vector3;
  stats: SceneStats;
}

const CUBE = new BoxGeometry(0.92, 0.92, 0.92);
const MARKER = new BoxGeometry(0.4, 0.4, 0.4);

function position(cell: GridCell, side: number): Vector3 {
  // center the grid on the origin so the camera orbits its middle
  const half = (side - 1) / 2;
  return new Vector3(cell.i - half, cell.j - half, cell.k - half);
}

/** Build the voxel scene for one grid state: an opaque colored cube per
 * active cell, translucent markers for the alive frontier, dark markers for
 * isolated cells.  Dead cells are simply absent. */
export function buildGridScene(state: GridState): GridScene {
  const group = new Group();
  const pickables: Mesh[] = [];
  const stats: SceneStats = { active: 0, alive: 0, isolated: 0, colors: new Set() };

  for (const cell of state.cells) {
    const where = position(cell, state.side);
    if (cell.state === "active") {
      const color = clusterColor(cell.cluster_id ?? 0);
      const mesh = new Mesh(
        CUBE,
        new MeshLambertMaterial({ color: new Color(color) }),
      );
      mesh.position.copy(where);
      mesh.userData = { docId: cell.doc_id, clusterId: cell.cluster_id, color };
      group.add(mesh);
      pickables.push(mesh);
      stats.active += 1;
      stats.colors.add(color);
    } else if (cell.state === "alive") {
      const mesh = new Mesh(
        MARKER,
        new MeshLambertMaterial({
          color: new Color("#ffffff"),
          transparent: true,
          opacity: ALIVE_OPACITY,
        }),
      );
      mesh.position.copy(where);
      group.add(mesh);
      stats.alive += 1;
    } else {
      const mesh = new Mesh(
        MARKER,
        new MeshLambertMaterial({ color: new Color(ISOLATED_COLOR) }),
      );
      mesh.position.copy(where);
      group.add(mesh);
      stats.isolated += 1;
    }
  }

  const bounds = new LineSegments(
    new EdgesGeometry(new BoxGeometry(state.side, state.side, state.side)),
    new LineBasicMaterial({ color: 0x666666 }),
  );
  group.add(bounds);
  group.updateMatrixWorld(true); // pickable before the first render

  return { group, pickables, center: new Vector3(0, 0, 0), stats };
}
