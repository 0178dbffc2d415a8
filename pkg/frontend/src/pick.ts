import { Camera, Mesh, Raycaster, Vector2 } from "three";

export interface PickResult {
  docId: number;
  clusterId?: number;
  color: string;
}

/** Raycast normalized device coordinates against the active cubes; returns
 * the nearest document cube or null for empty space. */
export function pickDocument(
  ndc: Vector2,
  camera: Camera,
  pickables: Mesh[],
  raycaster: Raycaster = new Raycaster(),
): PickResult | null {
  raycaster.setFromCamera(ndc, camera);
  const hit = raycaster.intersectObjects(pickables, false)[0];
  if (!hit) return null;
  const data = hit.object.userData as {
    docId?: number;
    clusterId?: number;
    color?: string;
  };
  if (typeof data.docId !== "number") return null;
  return {
    docId: data.docId,
    clusterId: data.clusterId,
    color: data.color ?? "#ffffff",
  };
}

export function toNdc(
  clientX: number,
  clientY: number,
  rect: { left: number; top: number; width: number; height: number },
): Vector2 {
  return new Vector2(
    ((clientX - rect.left) / rect.width) * 2 - 1,
    -(((clientY - rect.top) / rect.height) * 2 - 1),
  );
}
