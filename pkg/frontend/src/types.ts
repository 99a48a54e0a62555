/** Payload shapes served by the signpipe HTTP API. */

export interface TaskCard {
  task_id: string;
  title: string;
  domain: "recipe" | "howto";
  main_image: string | null;
  asl_supported: boolean;
}

export interface Boundary {
  token: string;
  start: number;
  end: number;
}

export interface Playlist {
  step_index: number;
  segments: string[];
  boundaries: Boundary[];
}

export interface IngredientLine {
  name: string;
  quantity_text: string;
}

export interface LandingScreen {
  kind: "landing";
  featured: TaskCard[];
  asl_entry: { label: string; action: string };
}

export interface TaskListScreen {
  kind: "task_list";
  cards: TaskCard[];
}

export interface StepScreen {
  kind: "step";
  task_id: string;
  step_index: number;
  step_count: number;
  text: string;
  image: string | null;
  playlist: Playlist | null;
  captions: Boundary[];
  navigation: { previous: boolean; next: boolean; home: boolean };
  ingredients?: IngredientLine[];
  error: string | null;
}

export type Screen = LandingScreen | TaskListScreen | StepScreen;
