/**
 * Screen flow: landing -> task list -> step N, every transition driven by
 * button presses. Step screens hand their playlist to the sequential player;
 * the active gloss caption highlights as each segment starts, and skipped
 * segments stay visible with a "missing" marker instead of disappearing.
 */

import { ApiClient } from "./api.js";
import { SequentialPlayer } from "./player.js";
import {
  boundaryForSegment,
  renderLanding,
  renderRetryBanner,
  renderStep,
  renderTaskList,
} from "./views.js";
import type { Screen, StepScreen, TaskCard } from "./types.js";

export class App {
  private cards: TaskCard[] = [];
  private stepScreens: StepScreen[] = [];
  private player: SequentialPlayer | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  async start(): Promise<void> {
    try {
      this.cards = await this.api.listTasks();
    } catch (err) {
      renderRetryBanner(this.root, `Could not reach the task service (${String(err)})`,
        () => void this.start());
      return;
    }
    this.showLanding();
  }

  showLanding(): void {
    this.stopPlayback();
    renderLanding(this.root, this.cards, () => this.showTaskList());
  }

  showTaskList(): void {
    this.stopPlayback();
    renderTaskList(this.root, this.cards, taskId => void this.openTask(taskId));
  }

  async openTask(taskId: string): Promise<void> {
    let screens: Screen[];
    try {
      screens = await this.api.screensForTask(taskId);
    } catch (err) {
      renderRetryBanner(this.root, `Could not load task ${taskId} (${String(err)})`,
        () => void this.openTask(taskId));
      return;
    }
    this.stepScreens = screens.filter((s): s is StepScreen => s.kind === "step");
    if (this.stepScreens.length > 0) {
      this.showStep(0);
    }
  }

  showStep(index: number): void {
    this.stopPlayback();
    const screen = this.stepScreens[index];
    const view = renderStep(this.root, screen, {
      onPrevious: () => {
        if (index > 0) {
          this.showStep(index - 1);
        }
      },
      onNext: () => {
        if (index < this.stepScreens.length - 1) {
          this.showStep(index + 1);
        }
      },
      onHome: () => this.showLanding(),
    });

    const segments = screen.playlist?.segments ?? [];
    this.player = new SequentialPlayer(view.video, view.preloader, {
      onSegmentStart: segmentIndex => {
        this.highlightCaption(view.captions, screen, segmentIndex);
        this.root.dispatchEvent(new CustomEvent("signpipe:segmentstart", {
          bubbles: true,
          detail: { step: screen.step_index, segment: segmentIndex },
        }));
      },
      onSegmentSkip: segmentIndex => {
        const captionIndex = boundaryForSegment(screen.captions, segmentIndex);
        if (captionIndex >= 0) {
          view.captions[captionIndex].classList.add("gloss-missing");
          view.captions[captionIndex].title = "video unavailable";
        }
        this.root.dispatchEvent(new CustomEvent("signpipe:segmentskip", {
          bubbles: true,
          detail: { step: screen.step_index, segment: segmentIndex },
        }));
      },
      onComplete: () => {
        this.root.dispatchEvent(new CustomEvent("signpipe:playlistdone", {
          bubbles: true,
          detail: { step: screen.step_index },
        }));
      },
    });
    this.player.load(segments);
  }

  private highlightCaption(captions: HTMLElement[], screen: StepScreen,
                           segmentIndex: number): void {
    const active = boundaryForSegment(screen.captions, segmentIndex);
    captions.forEach((caption, i) => {
      caption.classList.toggle("gloss-active", i === active);
    });
  }

  private stopPlayback(): void {
    this.player?.stop();
    this.player = null;
  }
}
