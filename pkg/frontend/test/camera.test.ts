import { PerspectiveCamera, Vector3 } from "three";
import { describe, expect, it } from "vitest";

import {
  PITCH_LIMIT,
  ZOOM_MAX,
  ZOOM_MIN,
  applyPose,
  defaultPose,
  orbit,
  restorePose,
  serializePose,
} from "../src/camera";

describe("camera pose", () => {
  it("full yaw turn returns to the starting position", () => {
    const start = defaultPose(11);
    let pose = start;
    const step = (Math.PI * 2) / 16;
    for (let i = 0; i < 16; i++) pose = orbit(pose, step, 0);
    const camera = new PerspectiveCamera();
    const again = new PerspectiveCamera();
    applyPose(camera, start, new Vector3());
    applyPose(again, pose, new Vector3());
    expect(again.position.distanceTo(camera.position)).toBeLessThan(1e-9);
  });

  it("clamps pitch short of the poles", () => {
    let pose = defaultPose(11);
    for (let i = 0; i < 100; i++) pose = orbit(pose, 0, 0.5);
    expect(pose.pitch).toBe(PITCH_LIMIT);
    for (let i = 0; i < 200; i++) pose = orbit(pose, 0, -0.5);
    expect(pose.pitch).toBe(-PITCH_LIMIT);
  });

  it("clamps zoom at both bounds", () => {
    let pose = defaultPose(11);
    for (let i = 0; i < 100; i++) pose = orbit(pose, 0, 0, -50);
    expect(pose.zoom).toBe(ZOOM_MIN);
    for (let i = 0; i < 100; i++) pose = orbit(pose, 0, 0, 50);
    expect(pose.zoom).toBe(ZOOM_MAX);
  });

  it("serializes and restores across reloads", () => {
    const pose = orbit(defaultPose(5), 1.1, -0.2, 3);
    const restored = restorePose(serializePose(pose));
    expect(restored).toEqual(pose);
  });

  it("rejects corrupt persisted poses", () => {
    expect(restorePose(null)).toBeNull();
    expect(restorePose("not json")).toBeNull();
    expect(restorePose('{"yaw": "high"}')).toBeNull();
  });

  it("re-clamps out-of-range persisted poses", () => {
    const restored = restorePose('{"yaw": 0, "pitch": 9, "zoom": 10000}');
    expect(restored?.pitch).toBe(PITCH_LIMIT);
    expect(restored?.zoom).toBe(ZOOM_MAX);
  });
});
