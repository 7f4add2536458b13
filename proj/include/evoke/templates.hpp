//
// Copyright 2026 The Evoke Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <string_view>

// Role prompts. Slots are `{name}` and are filled in a single pass.
namespace evoke::templates {

inline constexpr std::string_view kReviewer =
    "As an experienced teacher, you are well-versed in discerning effective "
    "instruction that guides students toward correct answers. Please rate the "
    "following instruction on a scale of 1 to 10, where 10 represents the highest "
    "level of clarity in problem description, execution steps, and a comprehensive "
    "explanation of the problem.\n"
    "The task at hand is titled: {description}\n"
    "History that may help you: {memory}\n"
    "The instruction to be rated is as follows: {instruction}\n"
    "Kindly provide your rating below.";

inline constexpr std::string_view kAuthor =
    "Task Instruction: {instruction}\n"
    "\n"
    "We've provided pairs consisting of inputs, the teacher's correct answers, and "
    "the students' responses. Please review the incorrect responses from the "
    "students and summarize key points that could be adjusted in the instruction "
    "to enhance student accuracy.\n"
    "\n"
    "Pairs: {pairs}\n"
    "History that may help you: {memory}\n"
    "To improve the outcome, please revise the task instruction. Highlight major "
    "edits and present the updated task instruction.";

inline constexpr std::string_view kSelector =
    "As an experienced teacher with insight into the various levels of difficulty "
    "of exam questions, please rate the following question on a scale of 1 to 10, "
    "considering factors such as conceptual understanding, application of "
    "knowledge, problem-solving skills, time required, clarity of language, and "
    "accessibility, where 1 denotes extremely easy and 10 denotes extremely "
    "difficult.\n"
    "Task instruction: {instruction}\n"
    "Input: {input}\n"
    "Correct answer: {answer}";

inline constexpr std::string_view kParaphrase =
    "Generate a variation of the following instruction while keeping the semantic "
    "meaning.\n"
    "Instruction: {instruction}\n"
    "Output:";

inline constexpr std::string_view kInduction =
    "I gave a friend an instruction. Based on the following input-output pairs, "
    "what was the instruction?\n"
    "{pairs}";

inline constexpr std::string_view kTaskEval = "{instruction}\n\nInput: {input}\nOutput:";

// Placeholder for an empty memory block.
inline constexpr std::string_view kEmptyMemory = "(none)";

}  // namespace evoke::templates
