/**
 * DOM construction for the three screen kinds. Every control is a plain
 * button wired to click (which pointer and touch input both produce); the UI
 * needs no sound and no keyboard.
 */

import type { Boundary, StepScreen, TaskCard } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderRetryBanner(root: HTMLElement, message: string, onRetry: () => void): void {
  root.replaceChildren();
  const banner = el("div", "retry-banner");
  banner.appendChild(el("p", "retry-message", message));
  const button = el("button", "retry-button", "Retry");
  button.addEventListener("click", onRetry);
  banner.appendChild(button);
  root.appendChild(banner);
}

export function renderLanding(root: HTMLElement, featured: TaskCard[],
                              onEnterAsl: () => void): void {
  root.replaceChildren();
  const page = el("section", "landing");
  page.appendChild(el("h1", "app-title", "Task Guide"));
  const enter = el("button", "asl-entry", "ASL Tasks");
  enter.addEventListener("click", onEnterAsl);
  page.appendChild(enter);
  const strip = el("div", "featured-strip");
  for (const card of featured.slice(0, 3)) {
    strip.appendChild(el("span", "featured-title", card.title));
  }
  page.appendChild(strip);
  root.appendChild(page);
}

export function renderTaskList(root: HTMLElement, cards: TaskCard[],
                               onSelect: (taskId: string) => void): void {
  root.replaceChildren();
  const page = el("section", "task-list");
  page.appendChild(el("h1", "app-title", "Choose a task"));
  const grid = el("div", "card-grid");
  for (const card of cards) {
    const button = el("button", "task-card");
    button.dataset.taskId = card.task_id;
    if (card.main_image) {
      const img = el("img", "card-image");
      img.src = card.main_image;
      img.alt = "";
      button.appendChild(img);
    }
    button.appendChild(el("span", "card-title", card.title));
    if (card.asl_supported) {
      button.appendChild(el("span", "card-badge", "ASL"));
    }
    button.addEventListener("click", () => onSelect(card.task_id));
    grid.appendChild(button);
  }
  page.appendChild(grid);
  root.appendChild(page);
}

export interface StepControls {
  onPrevious: () => void;
  onNext: () => void;
  onHome: () => void;
}

export interface StepView {
  video: HTMLVideoElement;
  preloader: HTMLVideoElement;
  captions: HTMLElement[];
}

export function renderStep(root: HTMLElement, screen: StepScreen,
                           controls: StepControls): StepView {
  root.replaceChildren();
  const page = el("section", "step-screen");
  page.dataset.stepIndex = String(screen.step_index);

  page.appendChild(el("h2", "step-heading",
    `Step ${screen.step_index + 1} of ${screen.step_count}`));

  const stage = el("div", "stage");
  const video = el("video", "sign-video");
  video.muted = true;
  video.autoplay = true;
  video.setAttribute("playsinline", "");
  stage.appendChild(video);
  const preloader = el("video", "sign-video-preload");
  preloader.hidden = true;
  stage.appendChild(preloader);

  if (screen.image) {
    const img = el("img", "step-image");
    img.src = screen.image;
    img.alt = screen.text;
    stage.appendChild(img);
  }
  page.appendChild(stage);

  const captionBar = el("div", "caption-bar");
  const captions: HTMLElement[] = [];
  for (const boundary of screen.captions) {
    const caption = el("span", "gloss-caption", boundary.token);
    captions.push(caption);
    captionBar.appendChild(caption);
  }
  page.appendChild(captionBar);

  if (screen.ingredients) {
    const panel = el("aside", "ingredients-panel");
    panel.appendChild(el("h3", "panel-title", "Ingredients"));
    const list = el("ul", "ingredient-list");
    for (const line of screen.ingredients) {
      const item = el("li", "ingredient-line",
        line.quantity_text ? `${line.name} (${line.quantity_text})` : line.name);
      list.appendChild(item);
    }
    panel.appendChild(list);
    page.appendChild(panel);
  }

  const nav = el("nav", "step-nav");
  const previous = el("button", "nav-previous", "Previous");
  previous.disabled = !screen.navigation.previous;
  previous.addEventListener("click", controls.onPrevious);
  const home = el("button", "nav-home", "Home");
  home.addEventListener("click", controls.onHome);
  const next = el("button", "nav-next", "Next");
  next.disabled = !screen.navigation.next;
  next.addEventListener("click", controls.onNext);
  nav.append(previous, home, next);
  page.appendChild(nav);

  root.appendChild(page);
  return { video, preloader, captions };
}

export function boundaryForSegment(captions: Boundary[], segmentIndex: number): number {
  return captions.findIndex(b => segmentIndex >= b.start && segmentIndex < b.end);
}
