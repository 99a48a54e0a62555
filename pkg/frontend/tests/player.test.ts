import { beforeEach, describe, expect, it } from "vitest";

import { SequentialPlayer } from "../src/player.js";
import { failSegment, finishSegment } from "./helpers.js";

describe("SequentialPlayer", () => {
  let video: HTMLVideoElement;
  let preloader: HTMLVideoElement;
  let started: number[];
  let skipped: number[];
  let completed: number;

  beforeEach(() => {
    video = document.createElement("video");
    preloader = document.createElement("video");
    started = [];
    skipped = [];
    completed = 0;
  });

  function makePlayer(): SequentialPlayer {
    return new SequentialPlayer(video, preloader, {
      onSegmentStart: i => started.push(i),
      onSegmentSkip: i => skipped.push(i),
      onComplete: () => { completed += 1; },
    });
  }

  it("plays every segment in order without user action", () => {
    const player = makePlayer();
    player.load(["a.mp4", "b.mp4", "c.mp4"]);
    expect(video.getAttribute("src")).toContain("a.mp4");
    finishSegment(video);
    expect(video.getAttribute("src")).toContain("b.mp4");
    finishSegment(video);
    finishSegment(video);
    expect(started).toEqual([0, 1, 2]);
    expect(completed).toBe(1);
  });

  it("preloads the upcoming segment", () => {
    const player = makePlayer();
    player.load(["a.mp4", "b.mp4"]);
    expect(preloader.getAttribute("src")).toContain("b.mp4");
    finishSegment(video);
    // nothing left to preload after the final segment starts
    expect(preloader.getAttribute("src")).toContain("b.mp4");
  });

  it("skips failing segments and reports them", () => {
    const player = makePlayer();
    player.load(["a.mp4", "broken.mp4", "c.mp4"]);
    finishSegment(video);
    failSegment(video);
    expect(skipped).toEqual([1]);
    expect(video.getAttribute("src")).toContain("c.mp4");
    finishSegment(video);
    expect(started).toEqual([0, 1, 2]);
    expect(completed).toBe(1);
  });

  it("empty playlist completes immediately", () => {
    const player = makePlayer();
    player.load([]);
    expect(completed).toBe(1);
    expect(started).toEqual([]);
  });

  it("stop() freezes advancement", () => {
    const player = makePlayer();
    player.load(["a.mp4", "b.mp4"]);
    player.stop();
    finishSegment(video);
    expect(started).toEqual([0]);
    expect(player.isActive).toBe(false);
  });
});
