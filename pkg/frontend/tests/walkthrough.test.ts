import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import type { Screen, StepScreen, TaskCard } from "../src/types.js";
import {
  finishSegment,
  fixture,
  flush,
  installFixtureFetch,
  pointerPress,
  query,
} from "./helpers.js";

const tasks = fixture<TaskCard[]>("tasks.json");
const origamiScreens = fixture<Screen[]>("origami_screens.json");
const blondiesScreens = fixture<Screen[]>("blondies_screens.json");

function stepScreens(screens: Screen[]): StepScreen[] {
  return screens.filter((s): s is StepScreen => s.kind === "step");
}

describe("task walkthrough", () => {
  let root: HTMLElement;
  let app: App;
  let segmentStarts: Array<{ step: number; segment: number }>;
  let playlistDone: number[];

  beforeEach(() => {
    document.body.innerHTML = '<main id="app"></main>';
    root = document.getElementById("app") as HTMLElement;
    segmentStarts = [];
    playlistDone = [];
    root.addEventListener("signpipe:segmentstart", evt => {
      segmentStarts.push((evt as CustomEvent).detail);
    });
    root.addEventListener("signpipe:playlistdone", evt => {
      playlistDone.push((evt as CustomEvent).detail.step);
    });
    installFixtureFetch({
      "/tasks": tasks,
      "/tasks/origami-crane/screens": origamiScreens,
      "/tasks/blondies/screens": blondiesScreens,
    });
    app = new App(root, new ApiClient(""));
  });

  function playCurrentStepToEnd(expected: StepScreen): void {
    const video = query<HTMLVideoElement>(root, "video.sign-video");
    const segments = expected.playlist?.segments ?? [];
    const before = playlistDone.length;
    // the player advances itself; the test only simulates clips finishing
    for (let i = 0; i < segments.length; i += 1) {
      finishSegment(video);
    }
    expect(playlistDone.length).toBe(before + 1);
  }

  it("landing -> ASL mode -> origami task -> all steps forward and back, pointer only", async () => {
    await app.start();
    expect(root.querySelector(".landing")).toBeTruthy();

    pointerPress(query(root, ".asl-entry"));
    expect(root.querySelector(".task-list")).toBeTruthy();
    expect(root.querySelectorAll(".task-card").length).toBe(tasks.length);

    pointerPress(query(root, '[data-task-id="origami-crane"]'));
    await flush();

    const steps = stepScreens(origamiScreens);
    expect(steps.length).toBe(4);

    // forward through every step, draining each playlist completely
    for (let stepIndex = 0; stepIndex < steps.length; stepIndex += 1) {
      const screen = query<HTMLElement>(root, ".step-screen");
      expect(screen.dataset.stepIndex).toBe(String(stepIndex));
      playCurrentStepToEnd(steps[stepIndex]);

      const next = query<HTMLButtonElement>(root, ".nav-next");
      const previous = query<HTMLButtonElement>(root, ".nav-previous");
      expect(previous.disabled).toBe(stepIndex === 0);
      expect(next.disabled).toBe(stepIndex === steps.length - 1);
      if (stepIndex < steps.length - 1) {
        pointerPress(next);
      }
    }

    // every playlist segment started exactly once, in order, per step
    for (const step of steps) {
      const mine = segmentStarts.filter(e => e.step === step.step_index);
      const segments = step.playlist?.segments ?? [];
      expect(mine.length).toBe(segments.length);
      expect(mine.map(e => e.segment)).toEqual(segments.map((_, i) => i));
    }
    expect(playlistDone.sort()).toEqual(steps.map(s => s.step_index));

    // and back again
    for (let stepIndex = steps.length - 1; stepIndex > 0; stepIndex -= 1) {
      pointerPress(query(root, ".nav-previous"));
      const screen = query<HTMLElement>(root, ".step-screen");
      expect(screen.dataset.stepIndex).toBe(String(stepIndex - 1));
    }
    expect(query<HTMLButtonElement>(root, ".nav-previous").disabled).toBe(true);

    pointerPress(query(root, ".nav-home"));
    expect(root.querySelector(".landing")).toBeTruthy();
  });

  it("caption of the active gloss highlights as segments start", async () => {
    await app.start();
    pointerPress(query(root, ".asl-entry"));
    pointerPress(query(root, '[data-task-id="origami-crane"]'));
    await flush();

    const step0 = stepScreens(origamiScreens)[0];
    const video = query<HTMLVideoElement>(root, "video.sign-video");
    const activeTokens: string[] = [];
    activeTokens.push(query(root, ".gloss-active").textContent ?? "");
    for (let i = 1; i < (step0.playlist?.segments.length ?? 0); i += 1) {
      finishSegment(video);
      activeTokens.push(query(root, ".gloss-active").textContent ?? "");
    }
    expect(activeTokens).toEqual(step0.captions.map(c => c.token));
  });

  it("recipe step shows the ingredients panel, how-to does not", async () => {
    await app.start();
    pointerPress(query(root, ".asl-entry"));
    pointerPress(query(root, '[data-task-id="blondies"]'));
    await flush();
    const panel = query(root, ".ingredients-panel");
    expect(panel.textContent).toContain("chocolate");

    pointerPress(query(root, ".nav-home"));
    pointerPress(query(root, ".asl-entry"));
    pointerPress(query(root, '[data-task-id="origami-crane"]'));
    await flush();
    expect(root.querySelector(".ingredients-panel")).toBeNull();
  });

  it("skipped segment keeps a visible marked caption", async () => {
    await app.start();
    pointerPress(query(root, ".asl-entry"));
    pointerPress(query(root, '[data-task-id="origami-crane"]'));
    await flush();

    const video = query<HTMLVideoElement>(root, "video.sign-video");
    video.dispatchEvent(new Event("error"));
    const missing = query(root, ".gloss-missing");
    expect(missing.textContent).toBeTruthy();
    // playback carried on with the next segment
    expect(segmentStarts.length).toBe(2);
  });

  it("service unreachable shows a retry banner that recovers", async () => {
    let healthy = false;
    globalThis.fetch = (async (input: RequestInfo | URL) => {
      if (!healthy) {
        throw new Error("connection refused");
      }
      return new Response(JSON.stringify(tasks), {
        status: 200, headers: { "Content-Type": "application/json" },
      });
    }) as typeof fetch;

    await app.start();
    const banner = query(root, ".retry-banner");
    expect(banner.textContent).toContain("Could not reach");

    healthy = true;
    pointerPress(query(root, ".retry-button"));
    await flush();
    expect(root.querySelector(".landing")).toBeTruthy();
  });
});
