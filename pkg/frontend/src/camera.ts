import { PerspectiveCamera, Vector3 } from "three";

export interface CameraPose {
  yaw: number;   // radians around the vertical axis
  pitch: number; // radians, clamped short of the poles
  zoom: number;  // distance from the grid center, clamped
}

export const PITCH_LIMIT = Math.PI / 2 - 0.05;
export const ZOOM_MIN = 2;
export const ZOOM_MAX = 120;

export function defaultPose(side: number): CameraPose {
  return { yaw: Math.PI / 4, pitch: Math.PI / 7, zoom: side * 2.4 };
}

const TWO_PI = Math.PI * 2;

/** Apply a drag/zoom delta; yaw wraps, pitch and zoom clamp. */
export function orbit(
  pose: CameraPose,
  dYaw: number,
  dPitch: number,
  dZoom = 0,
): CameraPose {
  let yaw = (pose.yaw + dYaw) % TWO_PI;
  if (yaw < 0) yaw += TWO_PI;
  const pitch = Math.min(PITCH_LIMIT, Math.max(-PITCH_LIMIT, pose.pitch + dPitch));
  const zoom = Math.min(ZOOM_MAX, Math.max(ZOOM_MIN, pose.zoom + dZoom));
  return { yaw, pitch, zoom };
}

/** Position a camera on the orbit sphere around the grid center. */
export function applyPose(
  camera: PerspectiveCamera,
  pose: CameraPose,
  center: Vector3,
): void {
  const horizontal = Math.cos(pose.pitch) * pose.zoom;
  camera.position.set(
    center.x + Math.sin(pose.yaw) * horizontal,
    center.y + Math.sin(pose.pitch) * pose.zoom,
    center.z + Math.cos(pose.yaw) * horizontal,
  );
  camera.lookAt(center);
}

export function serializePose(pose: CameraPose): string {
  return JSON.stringify(pose);
}

export function restorePose(raw: string | null): CameraPose | null {
  if (!raw) return null;
  try {
    const parsed = JSON.parse(raw);
    if (
      typeof parsed.yaw === "number" &&
      typeof parsed.pitch === "number" &&
      typeof parsed.zoom === "number"
    ) {
      return orbit(parsed, 0, 0); // re-clamp on the way in
    }
  } catch {
    // ignore corrupt poses
  }
  return null;
}
